use super::AudioClip;
use crate::error::{Error, Result};

/// Clipping above this fraction of samples is logged as a warning.
pub const CLIP_WARN_FRACTION: f64 = 0.001;

pub fn rms(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    (samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64).sqrt()
}

/// Scale a clip by a single positive factor so its largest magnitude is 1.
pub fn peak_normalize(clip: &AudioClip) -> Result<AudioClip> {
    let peak = clip.peak();
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::degenerate("peak normalization of an all-zero signal"));
    }
    if peak == 1.0 {
        return Ok(clip.clone());
    }
    let gain = 1.0 / peak;
    let mut samples: Vec<f64> = clip.samples.iter().map(|&s| s * gain).collect();
    // The reciprocal can leave the peak one ulp away from 1.
    for s in &mut samples {
        *s = s.clamp(-1.0, 1.0);
    }
    Ok(clip.with_samples(samples))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmsNormalized {
    pub samples: Vec<f64>,
    pub gain: f64,
    pub clipped_fraction: f64,
}

/// Scale `samples` so their RMS equals `target_rms`, then clamp to [-1, 1].
pub fn rms_normalize(samples: &[f64], target_rms: f64) -> Result<RmsNormalized> {
    if !(target_rms > 0.0 && target_rms.is_finite()) {
        return Err(Error::invalid(format!("target RMS must be positive, got {target_rms}")));
    }
    let current = rms(samples);
    if !(current > 0.0) || !current.is_finite() {
        return Err(Error::degenerate("RMS normalization of a silent signal"));
    }
    Ok(scale_and_clamp(samples, target_rms / current))
}

pub(crate) fn scale_and_clamp(samples: &[f64], gain: f64) -> RmsNormalized {
    let mut clipped = 0usize;
    let out: Vec<f64> = samples
        .iter()
        .map(|&s| {
            let v = s * gain;
            if v.abs() > 1.0 {
                clipped += 1;
                v.clamp(-1.0, 1.0)
            } else {
                v
            }
        })
        .collect();
    let clipped_fraction = if out.is_empty() {
        0.0
    } else {
        clipped as f64 / out.len() as f64
    };
    if clipped_fraction > CLIP_WARN_FRACTION {
        log::warn!("normalization clipped {:.3}% of samples", clipped_fraction * 100.0);
    }
    RmsNormalized {
        samples: out,
        gain,
        clipped_fraction,
    }
}
