//! Acceptance gate. Runs every primary criterion and prints one PASS/FAIL
//! line each; exits non-zero if any fails.
//!
//! Ratings default to the bundled synthetic fixture. Point
//! `VIBRO_RATINGS` and `VIBRO_MANIFEST` at real study exports to check
//! those instead; `VIBRO_RATINGS_COLUMNS` takes a column map such as
//! `clip_id=sound,rating=score`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use vibro_core::analysis::{
    aggregate, blend_targets, load_ratings_with_map, mse, reconstruction_metrics, ColumnMap, Level,
};
use vibro_core::bench::build_bench_corpus;
use vibro_core::converters::{convert, ConverterConfig};
use vibro_core::curation::{allocate, kmeans, load_manifest, stratified_sample};
use vibro_core::dsp::{butterworth_filter, FilterSpec};
use vibro_core::{Algorithm, AudioClip, VibrationSignal, Waveform};

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed += 1;
        }
    }
}

fn data_path(var: &str, file: &str) -> PathBuf {
    std::env::var_os(var)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(file))
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol + 1e-9
}

// Published winning algorithm of each ESC-50 class.
fn published_class_winner(class: u32) -> Algorithm {
    const FS: [u32; 10] = [10, 18, 20, 21, 24, 35, 36, 41, 44, 47];
    const HG: [u32; 13] = [3, 5, 7, 9, 11, 13, 14, 16, 17, 23, 33, 43, 46];
    if FS.contains(&class) {
        Algorithm::Fshift
    } else if HG.contains(&class) {
        Algorithm::HapticGen
    } else {
        Algorithm::Pitch
    }
}

fn ratings(gate: &mut Gate) {
    let start = Instant::now();
    let map: ColumnMap = match std::env::var("VIBRO_RATINGS_COLUMNS") {
        Ok(s) => s.parse().expect("VIBRO_RATINGS_COLUMNS"),
        Err(_) => ColumnMap::default(),
    };
    let loaded = load_ratings_with_map(&data_path("VIBRO_RATINGS", "ratings_synthetic.csv"), &map).and_then(|t| {
        let m = load_manifest(&data_path("VIBRO_MANIFEST", "manifest_synthetic.csv"))?;
        aggregate(&t, &m, Level::Class)
    });
    let report = match loaded {
        Ok(r) => r,
        Err(e) => {
            gate.check("aggregate-reproduction", false, format!("could not load ratings: {e}"));
            gate.check("winner-reproduction", false, "no ratings".into());
            return;
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    let published = [
        (Algorithm::Pitch, 62.6, 22.9),
        (Algorithm::HapticGen, 57.0, 23.2),
        (Algorithm::Fshift, 56.9, 24.3),
        (Algorithm::Plm, 31.2, 22.9),
    ];
    let mut ok = elapsed < 5.0;
    let mut detail = Vec::new();
    for (algo, mean, sd) in published {
        let s = report.overall.iter().find(|s| s.algorithm == algo);
        let (m, d) = s.map_or((f64::NAN, f64::NAN), |s| (s.mean, s.sd.unwrap_or(f64::NAN)));
        ok &= within(m, mean, 0.1) && within(d, sd, 0.1);
        detail.push(format!("{algo} {m:.2}/{d:.2}"));
    }
    gate.check(
        "aggregate-reproduction",
        ok,
        format!("{} in {elapsed:.2} s (means/SD within 0.1, < 5 s)", detail.join(", ")),
    );

    let counts = &report.clip_winner_counts;
    let expected = [
        (Algorithm::Pitch, 403),
        (Algorithm::Fshift, 288),
        (Algorithm::HapticGen, 261),
        (Algorithm::Plm, 56),
    ];
    let mut ok = report.clip_ties == 8;
    for (a, n) in expected {
        ok &= counts.get(&a) == Some(&n);
    }
    let mut mismatched = Vec::new();
    for g in &report.groups {
        let class: u32 = g.key.parse().expect("class key");
        if g.winners != [published_class_winner(class)] {
            mismatched.push(class);
        }
    }
    ok &= mismatched.is_empty() && report.groups.len() == 50;
    gate.check(
        "winner-reproduction",
        ok,
        format!(
            "clip winners {:?} ties {}; {} classes, mismatched {mismatched:?}",
            counts.iter().map(|(a, n)| format!("{a}={n}")).collect::<Vec<_>>(),
            report.clip_ties,
            report.groups.len()
        ),
    );
}

fn noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn one_pole_lowpass(x: &[f64], a: f64) -> Vec<f64> {
    let mut y = 0.0;
    x.iter()
        .map(|v| {
            y += a * (v - y);
            y
        })
        .collect()
}

/// Twenty synthetic environmental-sound stand-ins at mixed rates.
fn fixture_clips() -> Vec<AudioClip> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut out = Vec::new();
    let mut add = |name: &str, rate: u32, secs: f64, f: &mut dyn FnMut(f64, usize) -> f64| {
        let n = (secs * rate as f64) as usize;
        let s: Vec<f64> = (0..n).map(|i| f(i as f64 / rate as f64, i)).collect();
        out.push(AudioClip::new(s, rate).with_source_id(name));
    };
    add("sine440", 44100, 2.0, &mut |t, _| 0.5 * (TAU * 440.0 * t).sin());
    add("chirp", 44100, 3.0, &mut |t, _| {
        0.6 * (TAU * (100.0 * t + 316.7 * t * t)).sin()
    });
    add("am300", 44100, 2.0, &mut |t, _| {
        (0.5 + 0.5 * (TAU * 4.0 * t).sin()) * (TAU * 300.0 * t).sin()
    });
    add("harmonic150", 44100, 1.5, &mut |t, _| {
        (1..=8)
            .map(|h| (TAU * 150.0 * h as f64 * t).sin() / h as f64)
            .sum::<f64>()
            * 0.3
    });
    add("dyad", 44100, 2.0, &mut |t, _| {
        0.4 * ((TAU * 220.0 * t).sin() + (TAU * 233.0 * t).sin())
    });
    add("clicks", 44100, 2.0, &mut |_, i| if i % 4410 < 20 { 0.9 } else { 0.0 });
    add("whistle", 44100, 1.0, &mut |t, _| 0.3 * (TAU * 3000.0 * t).sin());
    add("vibrato", 44100, 2.0, &mut |t, _| {
        0.5 * (TAU * 500.0 * t + 50.0 / 6.0 * (TAU * 6.0 * t).sin()).sin()
    });
    add("square200", 8000, 2.0, &mut |t, _| {
        if (200.0 * t).fract() < 0.5 {
            0.4
        } else {
            -0.4
        }
    });
    add("saw110", 44100, 2.0, &mut |t, _| {
        0.5 * (2.0 * (110.0 * t).fract() - 1.0)
    });
    add("chord", 44100, 2.0, &mut |t, _| {
        [261.6, 329.6, 392.0].iter().map(|f| (TAU * f * t).sin()).sum::<f64>() * 0.25
    });
    add("gapped", 16000, 2.0, &mut |t, _| {
        if (t * 2.0).fract() < 0.5 {
            0.5 * (TAU * 180.0 * t).sin()
        } else {
            0.0
        }
    });
    add("rumble", 44100, 2.0, &mut |t, i| {
        0.5 * (TAU * 60.0 * t).sin() + 0.05 * (((i * 7919) % 1000) as f64 / 500.0 - 1.0)
    });

    let white = noise(&mut rng, 44100 * 2);
    out.push(AudioClip::new(white.iter().map(|v| v * 0.5).collect(), 44100).with_source_id("white"));
    let pink = one_pole_lowpass(&noise(&mut rng, 16000 * 2), 0.05);
    out.push(AudioClip::new(pink, 16000).with_source_id("brown"));
    let mut bursts = noise(&mut rng, 22050 * 3);
    for (i, v) in bursts.iter_mut().enumerate() {
        *v *= 0.8 * (-((i % 11025) as f64) / 1500.0).exp();
    }
    out.push(AudioClip::new(bursts, 22050).with_source_id("impacts"));
    let tone_noise: Vec<f64> = noise(&mut rng, 48000 * 2)
        .iter()
        .enumerate()
        .map(|(i, v)| 0.2 * v + 0.4 * (TAU * 1000.0 * i as f64 / 48000.0).sin())
        .collect();
    out.push(AudioClip::new(tone_noise, 48000).with_source_id("tone-in-noise"));
    let mut rain = vec![0.0; 44100 * 3];
    for _ in 0..300 {
        let at = rng.random_range(0..rain.len() - 200);
        let amp = rng.random_range(0.1..0.9);
        for k in 0..200 {
            rain[at + k] += amp * (-(k as f64) / 30.0).exp() * (TAU * 2500.0 * k as f64 / 44100.0).sin();
        }
    }
    out.push(AudioClip::new(rain, 44100).with_source_id("rain"));
    let engine: Vec<f64> = (0..(22050.0 * 2.5) as usize)
        .map(|i| {
            let t = i as f64 / 22050.0;
            let pulse = (-((t * 30.0).fract()) * 20.0).exp();
            0.6 * pulse * (TAU * 90.0 * t).sin() + 0.1 * (TAU * 30.0 * t).sin()
        })
        .collect();
    out.push(AudioClip::new(engine, 22050).with_source_id("engine"));
    let glottal = one_pole_lowpass(
        &(0..44100 * 2)
            .map(|i| if i % 368 == 0 { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
        0.3,
    );
    let voice = butterworth_filter(&glottal, 44100, &FilterSpec::bandpass(700.0, 2.0, 2)).expect("formant");
    out.push(AudioClip::new(voice, 44100).with_source_id("voice"));
    out
}

/// Full-period frequencies between upward zero crossings. Periods that
/// touch an exact zero sample are skipped: there the amplitude envelope is
/// zero and the carrier phase is not observable.
fn zero_crossing_frequencies(x: &[f64], rate: u32) -> Vec<f64> {
    let mut ups = Vec::new();
    for i in 1..x.len() {
        if x[i - 1] < 0.0 && x[i] > 0.0 {
            ups.push((i - 1, (i - 1) as f64 + x[i - 1] / (x[i - 1] - x[i])));
        }
    }
    ups.windows(2)
        .filter(|w| x[w[0].0..=w[1].0 + 1].iter().all(|&v| v != 0.0))
        .map(|w| rate as f64 / (w[1].1 - w[0].1))
        .collect()
}

fn power_spectrum(x: &[f64], hann: bool) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if hann {
                0.5 - 0.5 * (TAU * i as f64 / n as f64).cos()
            } else {
                1.0
            };
            Complex::new(v * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..=n / 2].iter().map(|c| c.norm_sqr()).collect()
}

fn band_fraction(power: &[f64], n: usize, rate: u32, bands: &[(f64, f64)]) -> f64 {
    let total: f64 = power.iter().sum();
    let hz = rate as f64 / n as f64;
    let inside: f64 = power
        .iter()
        .enumerate()
        .filter(|(k, _)| bands.iter().any(|&(lo, hi)| (lo..=hi).contains(&(*k as f64 * hz))))
        .map(|(_, p)| p)
        .sum();
    inside / total
}

fn converter_invariants(gate: &mut Gate) {
    let start = Instant::now();
    let cfg = ConverterConfig::default();
    let clips = fixture_clips();
    let mut problems: Vec<String> = Vec::new();
    let (mut hg_range, mut pm_range) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
    let mut plm_min_fraction = f64::INFINITY;
    let mut converted = 0;
    for clip in &clips {
        let id = clip.source_id.clone().unwrap_or_default();
        for algo in Algorithm::CONVERTERS {
            let (a, b) = match (convert(clip, algo, &cfg), convert(clip, algo, &cfg)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    problems.push(format!("{id}/{algo}: {e}"));
                    continue;
                }
            };
            converted += 1;
            let frame = match algo {
                Algorithm::Plm => cfg.plm.frame_size as f64 / clip.sample_rate as f64,
                _ => cfg.pitch.window_ms / 1000.0,
            };
            if a.sample_rate() != 8000 {
                problems.push(format!("{id}/{algo}: rate {}", a.sample_rate()));
            }
            if (a.duration_secs() - clip.duration_secs()).abs() > frame {
                problems.push(format!(
                    "{id}/{algo}: duration {} vs {}",
                    a.duration_secs(),
                    clip.duration_secs()
                ));
            }
            if a.samples.iter().any(|v| !(-1.0..=1.0).contains(v)) {
                problems.push(format!("{id}/{algo}: sample outside [-1, 1]"));
            }
            if a.samples
                .iter()
                .map(|v| v.to_bits())
                .ne(b.samples.iter().map(|v| v.to_bits()))
            {
                problems.push(format!("{id}/{algo}: runs differ"));
            }
            match algo {
                Algorithm::HapticGen | Algorithm::Pitch => {
                    let (lo, hi, range) = if algo == Algorithm::HapticGen {
                        (145.0, 255.0, &mut hg_range)
                    } else {
                        (45.0, 405.0, &mut pm_range)
                    };
                    for f in zero_crossing_frequencies(&a.samples, 8000) {
                        range.0 = range.0.min(f);
                        range.1 = range.1.max(f);
                        if !(lo..=hi).contains(&f) {
                            problems.push(format!("{id}/{algo}: {f:.1} Hz"));
                            break;
                        }
                    }
                }
                Algorithm::Plm => {
                    let p = power_spectrum(&a.samples, true);
                    let frac = band_fraction(&p, a.len(), 8000, &[(160.0, 190.0), (195.0, 225.0)]);
                    plm_min_fraction = plm_min_fraction.min(frac);
                    if frac < 0.9 {
                        problems.push(format!("{id}/plm: {:.1}% in carrier bands", 100.0 * frac));
                    }
                }
                _ => {}
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let ok = problems.is_empty() && elapsed < 60.0 && converted == 80;
    problems.truncate(5);
    gate.check(
        "converter-invariants",
        ok,
        format!(
            "{converted}/80 conversions in {elapsed:.1} s; hapticgen {:.1}-{:.1} Hz, pitch {:.1}-{:.1} Hz, \
             plm min {:.1}% in carrier bands{}",
            hg_range.0,
            hg_range.1,
            pm_range.0,
            pm_range.1,
            100.0 * plm_min_fraction,
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    );
}

fn steady_gain(spec: &FilterSpec, freq: f64, rate: u32) -> f64 {
    let n = rate as usize * 2;
    let x: Vec<f64> = (0..n).map(|i| (TAU * freq * i as f64 / rate as f64).sin()).collect();
    let y = butterworth_filter(&x, rate, spec).expect("filter");
    let tail = &y[n / 2..];
    (tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64 * 2.0).sqrt()
}

fn spectral_checks(gate: &mut Gate) {
    let cfg = ConverterConfig::default();
    let rate = 44100;
    let sine = AudioClip::new(
        (0..rate)
            .map(|i| 0.5 * (TAU * 440.0 * i as f64 / rate as f64).sin())
            .collect(),
        rate as u32,
    );
    let out = convert(&sine, Algorithm::Fshift, &cfg).expect("fshift sine");
    // drop the first quarter second of filter and vocoder onset
    let steady = &out.samples[2000..];
    let p = power_spectrum(steady, true);
    let bin_hz = 8000.0 / steady.len() as f64;
    let peak = (1..p.len()).fold(1, |b, k| if p[k] > p[b] { k } else { b });
    let peak_hz = peak as f64 * bin_hz;
    gate.check(
        "fshift-octave-peak",
        (peak_hz - 220.0).abs() <= bin_hz,
        format!("440 Hz sine -> dominant {peak_hz:.2} Hz (bin {bin_hz:.2} Hz)"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let white = AudioClip::new(noise(&mut rng, rate * 2), rate as u32);
    let out = convert(&white, Algorithm::Fshift, &cfg).expect("fshift noise");
    let p = power_spectrum(&out.samples, false);
    let low = band_fraction(&p, out.len(), 8000, &[(0.0, 1000.0)]);
    gate.check(
        "fshift-noise-lowband",
        low >= 0.8,
        format!("{:.1}% of energy below 1 kHz", 100.0 * low),
    );

    let spec = FilterSpec::bandpass(250.0, 1.0, 4);
    let (g_center, g_far) = (steady_gain(&spec, 250.0, 8000), steady_gain(&spec, 2500.0, 8000));
    let db = 20.0 * (g_center / g_far).log10();
    gate.check(
        "bandpass-rejection",
        db >= 30.0,
        format!("2500 Hz is {db:.1} dB below 250 Hz (swept-sine)"),
    );
}

fn blending(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let refs: Vec<VibrationSignal> = (0..4)
        .map(|_| VibrationSignal::new(noise(&mut rng, 4000), Algorithm::Plm))
        .collect();
    let mut one_hot = true;
    for k in 0..4 {
        let mut r = [0.0; 4];
        r[k] = rng.random_range(1.0..100.0);
        one_hot &= blend_targets(&refs, &r)
            .map(|b| b.samples == refs[k].samples)
            .unwrap_or(false);
    }

    let mut violations = 0;
    for _ in 0..1000 {
        let len = rng.random_range(1..300);
        let refs: Vec<VibrationSignal> = (0..4)
            .map(|_| VibrationSignal::new(noise(&mut rng, len), Algorithm::Pitch))
            .collect();
        let mut r: Vec<f64> = (0..4)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0.0
                } else {
                    rng.random_range(0.0..100.0)
                }
            })
            .collect();
        if r.iter().all(|&v| v == 0.0) {
            r[0] = 1.0;
        }
        let Ok(b) = blend_targets(&refs, &r) else {
            violations += 1;
            continue;
        };
        for n in 0..len {
            let active = refs.iter().zip(&r).filter(|(_, &w)| w > 0.0).map(|(s, _)| s.samples[n]);
            let (lo, hi) = active.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
            if !(lo..=hi).contains(&b.samples[n]) {
                violations += 1;
                break;
            }
        }
    }
    gate.check(
        "blending",
        one_hot && violations == 0,
        format!("one-hot bit-exact: {one_hot}; convex-envelope violations in 1000 cases: {violations}"),
    );
}

fn metrics(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = noise(&mut rng, 8000);
    let same = reconstruction_metrics(&x, &x, 8000).expect("metrics");
    let zero_ok = same.mse <= 1e-12
        && [same.stft_loss, same.mel_l1, same.amp_loss, same.rmse]
            .iter()
            .all(|v| *v <= 1e-6);

    let p = noise(&mut rng, 10);
    let t = noise(&mut rng, 10);
    let mut brute = 0.0;
    for i in 0..10 {
        brute += (p[i] - t[i]) * (p[i] - t[i]);
    }
    brute /= 10.0;
    let exact = mse(&p, &t).map(|m| m == brute).unwrap_or(false);

    let y = noise(&mut rng, 8000);
    let base = reconstruction_metrics(&x, &y, 8000).expect("metrics");
    let mut worst = 0.0f64;
    for c in [0.25, 0.5, 3.0, 7.5] {
        let xs: Vec<f64> = x.iter().map(|v| v * c).collect();
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let m = reconstruction_metrics(&xs, &ys, 8000).expect("metrics");
        for (got, want) in [
            (m.mse, base.mse * c * c),
            (m.rmse, base.rmse * c),
            (m.amp_loss, base.amp_loss * c),
        ] {
            worst = worst.max(((got - want) / want).abs());
        }
    }
    gate.check(
        "metrics",
        zero_ok && exact && worst <= 1e-9,
        format!("identical inputs zero: {zero_ok}; 10-sample mse exact: {exact}; homogeneity rel. error {worst:.1e}"),
    );
}

fn curation(gate: &mut Gate) {
    let centers = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)];
    let mut recovered = 0;
    let mut monotone = true;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let mut points = Vec::new();
        let mut truth = Vec::new();
        for (c, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..30 {
                let (z1, z2): (f64, f64) = (
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                );
                points.push(vec![cx + 0.05 * z1, cy + 0.05 * z2]);
                truth.push(c);
            }
        }
        let Ok(res) = kmeans(&points, 3, seed) else { continue };
        monotone &= res.objective_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        // same partition up to label permutation
        let mut map = BTreeMap::new();
        let consistent = truth
            .iter()
            .zip(&res.assignment)
            .all(|(t, a)| *map.entry(*t).or_insert(*a) == *a);
        let distinct: std::collections::BTreeSet<usize> = map.values().copied().collect();
        if consistent && distinct.len() == 3 {
            recovered += 1;
        }
    }

    let alloc = allocate(&[20, 12, 8], 20).unwrap_or_default();
    let assignment: Vec<usize> = (0..40)
        .map(|i| {
            if i < 20 {
                0
            } else if i < 32 {
                1
            } else {
                2
            }
        })
        .collect();
    let picked = stratified_sample(&assignment, 20, 5).unwrap_or_default();
    let mut per = [0usize; 3];
    for i in &picked {
        per[assignment[*i]] += 1;
    }
    gate.check(
        "curation",
        recovered == 20 && monotone && alloc == [10, 6, 4] && per == [10, 6, 4],
        format!(
            "blobs recovered {recovered}/20, objective monotone: {monotone}; allocation {alloc:?}, sampled {per:?}"
        ),
    );
}

fn bench_protocol(gate: &mut Gate) {
    let rate = 44100usize;
    let clips: Vec<AudioClip> = (0..50)
        .map(|c| {
            let f = 100.0 + 20.0 * c as f64;
            let s = (0..5 * rate)
                .map(|i| 0.5 * (TAU * f * i as f64 / rate as f64).sin() * (1.0 + (i % 7) as f64 / 70.0))
                .collect();
            AudioClip::new(s, rate as u32).with_source_id(format!("b{c:02}"))
        })
        .collect();
    let (sizes, lossless) = match build_bench_corpus(&clips) {
        Ok(corpus) => {
            let sizes: Vec<usize> = corpus.sizes().values().copied().collect();
            let ones = &corpus.sets[&1];
            let lossless = clips.iter().enumerate().all(|(c, clip)| {
                ones[5 * c..5 * c + 5]
                    .iter()
                    .flat_map(|s| s.samples.iter())
                    .eq(clip.samples.iter())
            });
            (sizes, lossless)
        }
        Err(_) => (Vec::new(), false),
    };
    gate.check(
        "bench-protocol",
        sizes == [250, 100, 50, 50, 50] && lossless,
        format!("corpus sizes {sizes:?} for 1/2/5/10/20 s; 1 s segments lossless: {lossless}"),
    );

    let cfg = ConverterConfig::default();
    let mut times = Vec::new();
    for algo in Algorithm::CONVERTERS {
        let _ = convert(&clips[0], algo, &cfg);
        let start = Instant::now();
        let ok = convert(&clips[1], algo, &cfg).is_ok();
        times.push((algo, start.elapsed().as_secs_f64(), ok));
    }
    let slowest = times.iter().map(|t| t.1).fold(0.0, f64::max);
    gate.check(
        "bench-latency-5s",
        times.iter().all(|t| t.2) && slowest < 1.0,
        format!(
            "5 s clip at 44.1 kHz: {}",
            times
                .iter()
                .map(|(a, s, _)| format!("{a} {s:.3} s"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    ratings(&mut gate);
    converter_invariants(&mut gate);
    spectral_checks(&mut gate);
    blending(&mut gate);
    metrics(&mut gate);
    curation(&mut gate);
    bench_protocol(&mut gate);
    if gate.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failed);
        ExitCode::FAILURE
    }
}
