use super::{normalize_vibration, prepare, ConverterConfig, NormalizationStrategy, RawVibration};
use crate::algorithm::Algorithm;
use crate::audio_io::{AudioClip, VibrationSignal};
use crate::dsp::{butterworth_filter, pitch_shift, FilterSpec};
use crate::error::{Error, Result};

/// The input plus its down-shifted copies, high-passed and band-passed at
/// the input rate. No peak or output normalization is applied.
pub fn fshift_raw(clip: &AudioClip, cfg: &ConverterConfig) -> Result<Vec<f64>> {
    if clip.is_empty() {
        return Err(Error::invalid("empty clip"));
    }
    let s = &cfg.fshift;
    let mut mix = clip.samples.clone();
    for &semitones in &s.shifts {
        let shifted = pitch_shift(clip, semitones)?;
        for (m, v) in mix.iter_mut().zip(&shifted.samples) {
            *m += v;
        }
    }
    let hp = butterworth_filter(&mix, clip.sample_rate, &FilterSpec::highpass(s.hp_cutoff, s.hp_order))?;
    butterworth_filter(
        &hp,
        clip.sample_rate,
        &FilterSpec::bandpass(s.bp_center, s.bp_q, s.bp_order),
    )
}

/// Frequency shifting: octave down-shifts folded back into the input and
/// shaped into the vibrotactile band.
pub fn convert_fshift(clip: &AudioClip, cfg: &ConverterConfig) -> Result<VibrationSignal> {
    let clip = prepare(clip)?;
    let raw = RawVibration {
        samples: fshift_raw(&clip, cfg)?,
        sample_rate: clip.sample_rate,
        algorithm: Algorithm::Fshift,
    };
    normalize_vibration(&raw, NormalizationStrategy::Global, cfg)
}
