//! Mono PCM audio and vibration waveforms: WAV I/O, band-limited
//! resampling, and peak / RMS normalization.

mod normalize;
mod resample;
mod wav;

pub(crate) use normalize::scale_and_clamp;
pub use normalize::{peak_normalize, rms, rms_normalize, RmsNormalized, CLIP_WARN_FRACTION};
pub use resample::{resample, resample_samples, stretch_samples};
pub use wav::{load_wav, save_wav};

use crate::algorithm::Algorithm;

/// Output rate of every vibration waveform.
pub const VIBRATION_RATE: u32 = 8000;

/// Anything that can be written as a mono PCM16 WAV file.
pub trait Waveform {
    fn samples(&self) -> &[f64];
    fn sample_rate(&self) -> u32;

    fn duration_secs(&self) -> f64 {
        self.samples().len() as f64 / self.sample_rate() as f64
    }
}

/// A mono source sound.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub source_id: Option<String>,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self {
            samples,
            sample_rate,
            source_id: None,
        }
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, &s| m.max(s.abs()))
    }

    /// A copy sharing sample rate and source id but carrying `samples`.
    pub fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            sample_rate: self.sample_rate,
            source_id: self.source_id.clone(),
        }
    }
}

impl Waveform for AudioClip {
    fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn sample_rate(&self) -> u32 {
        self.sample_rate
    }
}

/// Haptic output of a converter, always at [`VIBRATION_RATE`].
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationSignal {
    pub samples: Vec<f64>,
    pub algorithm: Algorithm,
    /// Fraction of samples that hit the [-1, 1] clamp during normalization.
    pub clipped_fraction: f64,
}

impl VibrationSignal {
    pub fn new(samples: Vec<f64>, algorithm: Algorithm) -> Self {
        Self {
            samples,
            algorithm,
            clipped_fraction: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl Waveform for VibrationSignal {
    fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn sample_rate(&self) -> u32 {
        VIBRATION_RATE
    }
}
