use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vibro_core::analysis::Level;
use vibro_core::Algorithm;

mod commands;

use commands::Failure;

/// Convert environmental sounds into 8 kHz vibration waveforms and analyse
/// rated audio-vibration datasets.
#[derive(Debug, Parser)]
#[command(name = "vibro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Converter settings shared by every command that runs a converter.
/// Flags override the config file, which overrides built-in defaults.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// TOML converter configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one setting, e.g. `--set hapticgen.f_dev=40` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert one WAV file with one algorithm.
    Convert {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Convert every manifest clip with each algorithm, writing
    /// `<clip_id>.<algo>.wav` into the output directory.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
        /// Comma-separated algorithm list.
        #[arg(long, default_value = "plm,fshift,pitch,hapticgen")]
        algos: String,
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Extract the 31-value acoustic feature vector of one file or of every
    /// manifest clip into a JSON object keyed by clip id.
    Features {
        #[arg(long = "in", conflicts_with = "manifest", required_unless_present = "manifest")]
        input: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a fixed number of clips per class by clustered sampling.
    /// Paths are copied verbatim, so write the output next to the input.
    Curate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 20)]
        per_class: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        seed: u64,
        /// Precomputed features from `vibro features --manifest`.
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply seeded pitch-shift and noise augmentation to one clip.
    Augment {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rating-weighted average of reference vibrations.
    Blend {
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        refs: Vec<PathBuf>,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        ratings: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruction metrics between two equal-length WAV files.
    Metrics {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// JSON report path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate human ratings by category, class or clip.
    Report {
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "class")]
        level: Level,
        /// Source column names, e.g. `clip_id=sound,rating=score`.
        #[arg(long)]
        column_map: Option<String>,
        /// Emit JSON instead of a text table.
        #[arg(long)]
        json: bool,
    },
    /// Time the converters on the segmented benchmark corpus built from
    /// fifty five-second clips.
    Bench {
        #[arg(long)]
        clips: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20")]
        durations: Vec<u32>,
        #[arg(long, default_value = "plm,fshift,pitch,hapticgen")]
        algos: String,
        #[arg(long, default_value_t = 1)]
        warmup: usize,
        /// Time only the first N clips of each duration.
        #[arg(long)]
        max_clips: Option<usize>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(match f {
                Failure::Validation(_) => 1,
                Failure::Runtime(_) => 2,
            })
        }
    }
}
