use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use vibro_core::analysis::{aggregate, blend_targets, load_ratings_with_map, reconstruction_metrics, ColumnMap};
use vibro_core::audio_io::{load_wav, save_wav};
use vibro_core::bench::{build_bench_corpus, load_bench_clips, render_bench_table, run_bench, BenchOptions};
use vibro_core::converters::{convert, ConverterConfig};
use vibro_core::curation::{
    augment, curate_manifest, extract_features, load_manifest, read_features_json, write_features_json, write_manifest,
    DatasetManifest, FeatureVector,
};
use vibro_core::{Algorithm, Error, VibrationSignal};

use crate::{Command, ConfigArgs};

/// Exit code 1 for bad input, 2 for failures while processing valid input.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Runtime(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn config(args: &ConfigArgs) -> Result<ConverterConfig, Failure> {
    Ok(ConverterConfig::layered(args.config.as_deref(), &args.overrides)?)
}

fn algorithms(list: &str) -> Result<Vec<Algorithm>, Failure> {
    let algos = Algorithm::parse_list(list)?;
    if algos.is_empty() {
        return Err(Failure::Validation("empty algorithm list".into()));
    }
    if let Some(a) = algos.iter().find(|a| a.converter_index().is_none()) {
        return Err(Failure::Validation(format!("'{a}' is not a converter")));
    }
    Ok(algos)
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Validation(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn clip_id(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "clip".into(), |s| s.to_string_lossy().into_owned())
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Convert {
            algo,
            input,
            out,
            config: c,
        } => {
            let cfg = config(&c)?;
            if algo.converter_index().is_none() {
                return Err(Failure::Validation(format!("'{algo}' is not a converter")));
            }
            let clip = load_wav(&input)?;
            let vib = convert(&clip, algo, &cfg)?;
            save_wav(&vib, &out)?;
        }
        Command::Batch {
            manifest,
            algos,
            out_dir,
            workers,
            config: c,
        } => {
            let cfg = config(&c)?;
            let algos = algorithms(&algos)?;
            let manifest = load_manifest(&manifest)?;
            fs::create_dir_all(&out_dir).map_err(|e| Failure::Validation(format!("{}: {e}", out_dir.display())))?;
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = workers {
                if n == 0 {
                    return Err(Failure::Validation("--workers must be at least 1".into()));
                }
                pool = pool.num_threads(n);
            }
            let pool = pool.build().map_err(|e| Failure::Runtime(e.to_string()))?;
            pool.install(|| {
                manifest.entries.par_iter().try_for_each(|entry| -> Outcome {
                    let clip = load_wav(manifest.resolve(entry))?.with_source_id(entry.clip_id.clone());
                    for &algo in &algos {
                        let vib = convert(&clip, algo, &cfg).map_err(|e| Error::ClipFailed {
                            clip_id: entry.clip_id.clone(),
                            source: Box::new(e),
                        })?;
                        save_wav(&vib, out_dir.join(format!("{}.{}.wav", entry.clip_id, algo.as_str())))?;
                    }
                    Ok(())
                })
            })?;
            log::info!("wrote {} files", manifest.len() * algos.len());
        }
        Command::Features { input, manifest, out } => {
            let mut features = BTreeMap::new();
            if let Some(path) = input {
                features.insert(clip_id(&path), extract_features(&load_wav(&path)?)?);
            } else if let Some(path) = manifest {
                features = manifest_features(&load_manifest(&path)?)?;
            }
            write_features_json(&features, &out)?;
        }
        Command::Curate {
            manifest,
            per_class,
            k,
            seed,
            features,
            out,
        } => {
            let manifest = load_manifest(&manifest)?;
            let features = match features {
                Some(path) => read_features_json(&path)?,
                None => manifest_features(&manifest)?,
            };
            let curated = curate_manifest(&manifest, &features, k, per_class, seed)?;
            write_manifest(&curated, &out)?;
        }
        Command::Augment { input, seed, out } => {
            let clip = load_wav(&input)?;
            let (augmented, record) = augment(&clip, seed)?;
            save_wav(&augmented, &out)?;
            log::info!("{record:?}");
        }
        Command::Blend { refs, ratings, out } => {
            let signals = refs
                .iter()
                .map(|p| {
                    let clip = load_wav(p)?;
                    if clip.sample_rate != vibro_core::VIBRATION_RATE {
                        return Err(Failure::Validation(format!(
                            "{}: expected {} Hz, got {}",
                            p.display(),
                            vibro_core::VIBRATION_RATE,
                            clip.sample_rate
                        )));
                    }
                    Ok(VibrationSignal::new(clip.samples, Algorithm::Blended))
                })
                .collect::<Result<Vec<_>, _>>()?;
            save_wav(&blend_targets(&signals, &ratings)?, &out)?;
        }
        Command::Metrics { pred, target, out } => {
            let (p, t) = (load_wav(&pred)?, load_wav(&target)?);
            if p.sample_rate != t.sample_rate {
                return Err(Failure::Validation(format!(
                    "sample rates differ: {} vs {}",
                    p.sample_rate, t.sample_rate
                )));
            }
            let report = reconstruction_metrics(&p.samples, &t.samples, t.sample_rate)?;
            write_json(&report, out.as_deref())?;
        }
        Command::Report {
            ratings,
            manifest,
            level,
            column_map,
            json,
        } => {
            let map: ColumnMap = column_map
                .as_deref()
                .map_or_else(|| Ok(ColumnMap::default()), str::parse)?;
            let table = load_ratings_with_map(&ratings, &map)?;
            let report = aggregate(&table, &load_manifest(&manifest)?, level)?;
            if json {
                write_json(&report, None)?;
            } else {
                print!("{}", report.render_table());
            }
        }
        Command::Bench {
            clips,
            durations,
            algos,
            warmup,
            max_clips,
            json,
            config: c,
        } => {
            let cfg = config(&c)?;
            let opts = BenchOptions {
                durations,
                algorithms: algorithms(&algos)?,
                warmup,
                max_clips,
            };
            let corpus = build_bench_corpus(&load_bench_clips(&clips)?)?;
            let results = run_bench(&corpus, &opts, &cfg)?;
            if json {
                write_json(&results, None)?;
            } else {
                print!("{}", render_bench_table(&results));
            }
        }
    }
    Ok(())
}

fn manifest_features(manifest: &DatasetManifest) -> Result<BTreeMap<String, FeatureVector>, Failure> {
    manifest
        .entries
        .iter()
        .map(|e| {
            let clip = load_wav(manifest.resolve(e))?;
            let f = extract_features(&clip).map_err(|err| Error::ClipFailed {
                clip_id: e.clip_id.clone(),
                source: Box::new(err),
            })?;
            Ok((e.clip_id.clone(), f))
        })
        .collect()
}
