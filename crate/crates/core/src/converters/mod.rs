//! The four audio-to-vibration converters and their shared output
//! normalization.
//!
//! Every converter peak-normalizes its input, produces a raw waveform and
//! hands it to [`normalize_vibration`]. PLM, pitch matching and HapticGen
//! synthesize directly at 8 kHz and normalize by their loudest native frame;
//! frequency shifting filters at the input rate, is resampled to 8 kHz and
//! normalized by global RMS.

mod config;
mod fshift;
mod hapticgen;
mod pitch;
mod plm;

pub use config::{ConverterConfig, FshiftConfig, HapticGenConfig, PitchConfig, PlmConfig};
pub use fshift::{convert_fshift, fshift_raw};
pub use hapticgen::{convert_hapticgen, hapticgen_tracks};
pub use pitch::{convert_pitch, pitch_tracks};
pub use plm::{convert_plm, plm_frame_features, PlmFrame};

use crate::algorithm::Algorithm;
use crate::audio_io::scale_and_clamp;
use crate::audio_io::{peak_normalize, resample_samples, rms, AudioClip, VibrationSignal};
use crate::error::{Error, Result};

/// Converter output before normalization, at whatever rate it was made.
#[derive(Debug, Clone, PartialEq)]
pub struct RawVibration {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub algorithm: Algorithm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationStrategy {
    /// Loudest segment of `segment_len` output samples reaches the target RMS.
    SegmentMax { segment_len: usize },
    /// Whole-signal RMS reaches the target.
    Global,
}

/// Resample `raw` to the output rate, scale it by one gain chosen by
/// `strategy` so the reference RMS equals `cfg.target_segment_rms`, then
/// clamp to [-1, 1].
///
/// Resampling comes first so the measured RMS is that of the delivered
/// waveform.
pub fn normalize_vibration(
    raw: &RawVibration,
    strategy: NormalizationStrategy,
    cfg: &ConverterConfig,
) -> Result<VibrationSignal> {
    if raw.samples.is_empty() {
        return Err(Error::degenerate("empty vibration"));
    }
    let samples = resample_samples(&raw.samples, raw.sample_rate, cfg.output_rate)?;
    let reference = match strategy {
        NormalizationStrategy::Global => rms(&samples),
        NormalizationStrategy::SegmentMax { segment_len } => {
            if segment_len == 0 {
                return Err(Error::invalid("segment length must be positive"));
            }
            samples.chunks(segment_len).map(rms).fold(0.0, f64::max)
        }
    };
    if !(reference > 0.0) || !reference.is_finite() {
        return Err(Error::degenerate(format!("{} output is silent", raw.algorithm)));
    }
    let scaled = scale_and_clamp(&samples, cfg.target_segment_rms / reference);
    Ok(VibrationSignal {
        samples: scaled.samples,
        algorithm: raw.algorithm,
        clipped_fraction: scaled.clipped_fraction,
    })
}

/// Run the converter named by `algo`.
pub fn convert(clip: &AudioClip, algo: Algorithm, cfg: &ConverterConfig) -> Result<VibrationSignal> {
    match algo {
        Algorithm::Plm => convert_plm(clip, cfg),
        Algorithm::Fshift => convert_fshift(clip, cfg),
        Algorithm::Pitch => convert_pitch(clip, cfg),
        Algorithm::HapticGen => convert_hapticgen(clip, cfg),
        Algorithm::Blended => Err(Error::Validation(
            "blended is not a converter; use analysis::blend_targets".into(),
        )),
    }
}

/// Output length for an input of `len` samples at `rate`.
pub(crate) fn output_len(len: usize, rate: u32, cfg: &ConverterConfig) -> usize {
    let (len, rate, out) = (len as u64, rate as u64, cfg.output_rate as u64);
    ((len * out + rate / 2) / rate) as usize
}

/// Peak-normalize, passing silent clips through so the degenerate-signal
/// error comes from output normalization.
pub(crate) fn prepare(clip: &AudioClip) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::invalid("empty clip"));
    }
    if clip.sample_rate == 0 {
        return Err(Error::invalid("sample rate must be positive"));
    }
    if clip.peak() == 0.0 {
        return Ok(clip.clone());
    }
    peak_normalize(clip)
}

/// Samples in `ms` milliseconds at `rate`, at least one.
pub(crate) fn ms_to_samples(ms: f64, rate: u32) -> usize {
    ((ms * rate as f64 / 1000.0).round() as usize).max(1)
}
