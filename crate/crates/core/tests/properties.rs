use std::f64::consts::TAU;

use proptest::prelude::*;
use vibro_core::audio_io::{load_wav, peak_normalize, resample_samples, rms, save_wav};
use vibro_core::bench::{build_bench_corpus, run_bench, BenchOptions};
use vibro_core::converters::{convert, ConverterConfig};
use vibro_core::{Algorithm, AudioClip};

fn harmonic(rate: u32, secs: f64, amp: f64) -> AudioClip {
    let n = (rate as f64 * secs) as usize;
    AudioClip::new(
        (0..n)
            .map(|i| {
                let t = i as f64 / rate as f64;
                amp * (0.6 * (TAU * 330.0 * t).sin() + 0.3 * (TAU * 660.0 * t).sin() + 0.1 * (TAU * 1250.0 * t).sin())
            })
            .collect(),
        rate,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn resample_is_linear(
        x in prop::collection::vec(-1.0f64..1.0, 32..400),
        a in -4.0f64..4.0,
        rates in prop::sample::select(vec![(44100u32, 8000u32), (8000, 22050), (16000, 8000), (48000, 44100)]),
    ) {
        let scaled: Vec<f64> = x.iter().map(|v| a * v).collect();
        let y = resample_samples(&x, rates.0, rates.1).unwrap();
        let ys = resample_samples(&scaled, rates.0, rates.1).unwrap();
        let norm = y.iter().map(|v| (a * v).abs()).fold(0.0, f64::max).max(1e-300);
        for (p, q) in y.iter().zip(&ys) {
            prop_assert!((a * p - q).abs() <= 1e-9 * norm);
        }
    }
}

#[test]
fn fshift_ignores_input_gain() {
    let cfg = ConverterConfig::default();
    let clip = harmonic(22050, 1.0, 0.2);
    let base = convert(&clip, Algorithm::Fshift, &cfg).unwrap();
    for other in [peak_normalize(&clip).unwrap(), harmonic(22050, 1.0, 0.9)] {
        let out = convert(&other, Algorithm::Fshift, &cfg).unwrap();
        let diff: Vec<f64> = base.samples.iter().zip(&out.samples).map(|(a, b)| a - b).collect();
        assert!(rms(&diff) <= 1e-4, "{}", rms(&diff));
    }
}

#[test]
fn converted_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.wav");
    save_wav(&harmonic(44100, 1.0, 0.5), &src).unwrap();
    let cfg = ConverterConfig::default();
    for algo in Algorithm::CONVERTERS {
        let mut files = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{algo}-{run}.wav"));
            save_wav(&convert(&load_wav(&src).unwrap(), algo, &cfg).unwrap(), &out).unwrap();
            files.push(std::fs::read(out).unwrap());
        }
        assert_eq!(files[0], files[1], "{algo}");
    }
}

#[test]
fn latency_grows_with_duration() {
    let clips: Vec<AudioClip> = (0..50).map(|_| harmonic(16000, 5.0, 0.5)).collect();
    let corpus = build_bench_corpus(&clips).unwrap();
    let opts = BenchOptions {
        durations: vec![1, 20],
        algorithms: Algorithm::CONVERTERS.to_vec(),
        warmup: 1,
        max_clips: Some(3),
    };
    let results = run_bench(&corpus, &opts, &ConverterConfig::default()).unwrap();
    assert_eq!(results.len(), 8);
    for algo in Algorithm::CONVERTERS {
        let mean = |d| {
            results
                .iter()
                .find(|r| r.algorithm == algo && r.duration_s == d)
                .unwrap()
                .mean_latency_s
        };
        assert!(mean(20) >= mean(1), "{algo}: {} < {}", mean(20), mean(1));
    }
}
