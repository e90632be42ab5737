//! Converter latency benchmark over a fixed segmentation of fifty
//! five-second clips: 250 one-second, 100 two-second, 50 five-second and 50
//! each of the ten- and twenty-second repetitions.
//!
//! Clips are held in memory before timing starts, so file I/O and WAV
//! encoding are excluded. Timed runs are sequential on the calling thread.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::algorithm::Algorithm;
use crate::audio_io::{load_wav, AudioClip};
use crate::converters::{convert, ConverterConfig};
use crate::error::{Error, Result};

pub const CORPUS_CLIPS: usize = 50;
pub const SOURCE_SECS: u32 = 5;
pub const DURATIONS: [u32; 5] = [1, 2, 5, 10, 20];

/// Benchmark clips keyed by duration in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCorpus {
    pub sets: BTreeMap<u32, Vec<AudioClip>>,
}

impl BenchCorpus {
    pub fn sizes(&self) -> BTreeMap<u32, usize> {
        self.sets.iter().map(|(d, v)| (*d, v.len())).collect()
    }
}

fn id_of(clip: &AudioClip, i: usize) -> String {
    clip.source_id.clone().unwrap_or_else(|| format!("clip{i:02}"))
}

/// Segment fifty five-second clips: five 1 s pieces each, two 2 s pieces
/// each (the fifth second is dropped), the clip itself, and the clip
/// repeated twice and four times.
pub fn build_bench_corpus(clips: &[AudioClip]) -> Result<BenchCorpus> {
    if clips.len() != CORPUS_CLIPS {
        return Err(Error::Protocol(format!(
            "benchmark corpus needs {CORPUS_CLIPS} clips, got {}",
            clips.len()
        )));
    }
    let mut sets: BTreeMap<u32, Vec<AudioClip>> = DURATIONS.iter().map(|&d| (d, Vec::new())).collect();
    for (i, clip) in clips.iter().enumerate() {
        let id = id_of(clip, i);
        let sec = clip.sample_rate as usize;
        if clip.len() != SOURCE_SECS as usize * sec {
            return Err(Error::Protocol(format!(
                "clip {id} has {} samples; expected exactly {SOURCE_SECS} s at {} Hz",
                clip.len(),
                clip.sample_rate
            )));
        }
        let piece = |from: usize, secs: usize, name: String| {
            clip.with_samples(clip.samples[from * sec..(from + secs) * sec].to_vec())
                .with_source_id(name)
        };
        for k in 0..5 {
            sets.get_mut(&1).unwrap().push(piece(k, 1, format!("{id}_1s_{k}")));
        }
        for k in 0..2 {
            sets.get_mut(&2).unwrap().push(piece(2 * k, 2, format!("{id}_2s_{k}")));
        }
        sets.get_mut(&5)
            .unwrap()
            .push(clip.clone().with_source_id(format!("{id}_5s")));
        for reps in [2usize, 4] {
            let samples = clip.samples.repeat(reps);
            let d = SOURCE_SECS * reps as u32;
            sets.get_mut(&d)
                .unwrap()
                .push(clip.with_samples(samples).with_source_id(format!("{id}_{d}s")));
        }
    }
    Ok(BenchCorpus { sets })
}

/// Load every `.wav` file in `dir`, in file-name order.
pub fn load_bench_clips(dir: &Path) -> Result<Vec<AudioClip>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
        .collect();
    paths.sort();
    paths.iter().map(load_wav).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub durations: Vec<u32>,
    pub algorithms: Vec<Algorithm>,
    /// Untimed conversions of the set's first clip before timing.
    pub warmup: usize,
    /// Time only the first `n` clips of each set.
    pub max_clips: Option<usize>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            durations: DURATIONS.to_vec(),
            algorithms: Algorithm::CONVERTERS.to_vec(),
            warmup: 1,
            max_clips: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub duration_s: u32,
    pub clip_count: usize,
    pub algorithm: Algorithm,
    pub mean_latency_s: f64,
    /// Sample standard deviation; 0 for a single clip.
    pub sd_latency_s: f64,
}

/// Time every requested (duration, algorithm) pair. One row per pair, in
/// the order given by the options.
pub fn run_bench(corpus: &BenchCorpus, opts: &BenchOptions, cfg: &ConverterConfig) -> Result<Vec<BenchResult>> {
    if opts.warmup == 0 {
        return Err(Error::Validation("warmup must be at least 1".into()));
    }
    if opts.max_clips == Some(0) {
        return Err(Error::Validation("max_clips must be at least 1".into()));
    }
    if let Some(a) = opts.algorithms.iter().find(|a| a.converter_index().is_none()) {
        return Err(Error::Validation(format!("{a} cannot be benchmarked")));
    }
    let mut results = Vec::with_capacity(opts.durations.len() * opts.algorithms.len());
    for &d in &opts.durations {
        let set =
            corpus.sets.get(&d).filter(|s| !s.is_empty()).ok_or_else(|| {
                Error::Validation(format!("no {d} s clips in the corpus (choose from {DURATIONS:?})"))
            })?;
        let set = &set[..opts.max_clips.map_or(set.len(), |m| m.min(set.len()))];
        for &algo in &opts.algorithms {
            let run = |i: usize, clip: &AudioClip| {
                convert(clip, algo, cfg).map_err(|e| Error::ClipFailed {
                    clip_id: id_of(clip, i),
                    source: Box::new(e),
                })
            };
            for _ in 0..opts.warmup {
                run(0, &set[0])?;
            }
            let mut times = Vec::with_capacity(set.len());
            for (i, clip) in set.iter().enumerate() {
                let start = Instant::now();
                let out = run(i, clip)?;
                times.push(start.elapsed().as_secs_f64());
                std::hint::black_box(out);
            }
            let n = times.len() as f64;
            let mean = times.iter().sum::<f64>() / n;
            let sd = if times.len() > 1 {
                (times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            log::info!("{d} s {algo}: mean {mean:.4} s over {} clips", times.len());
            results.push(BenchResult {
                duration_s: d,
                clip_count: times.len(),
                algorithm: algo,
                mean_latency_s: mean,
                sd_latency_s: sd,
            });
        }
    }
    Ok(results)
}

pub fn render_bench_table(results: &[BenchResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>9} {:<10} {:>6} {:>12} {:>12}",
        "duration", "algorithm", "clips", "mean (s)", "sd (s)"
    );
    for r in results {
        let _ = writeln!(
            out,
            "{:>8}s {:<10} {:>6} {:>12.5} {:>12.5}",
            r.duration_s,
            r.algorithm.as_str(),
            r.clip_count,
            r.mean_latency_s,
            r.sd_latency_s
        );
    }
    out
}
