use super::{
    ms_to_samples, normalize_vibration, output_len, prepare, ConverterConfig, NormalizationStrategy, RawVibration,
};
use crate::algorithm::Algorithm;
use crate::audio_io::{AudioClip, VibrationSignal};
use crate::dsp::{frame_rms, interpolate_track, nco_synthesize};
use crate::error::{Error, Result};

/// Window centres (seconds), frequencies and amplitudes of the HapticGen
/// control track for `clip` as given.
///
/// `r = rms / max_rms` per non-overlapping window; frequency is
/// `f_center - f_dev + 2 f_dev r` and amplitude is `r`.
pub fn hapticgen_tracks(clip: &AudioClip, cfg: &ConverterConfig) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let h = &cfg.hapticgen;
    let fs = clip.sample_rate;
    let win = ms_to_samples(h.window_ms, fs);
    let levels = frame_rms(&clip.samples, fs, h.window_ms, h.window_ms)?;
    let max = levels.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::degenerate("hapticgen input is silent"));
    }
    let times = (0..levels.len())
        .map(|i| (i * win) as f64 / fs as f64 + win as f64 / (2.0 * fs as f64))
        .collect();
    let amps: Vec<f64> = levels.iter().map(|l| l / max).collect();
    let freqs = amps.iter().map(|r| h.f_center - h.f_dev + 2.0 * h.f_dev * r).collect();
    Ok((times, freqs, amps))
}

/// HapticGen-style conversion: a sinusoid frequency- and amplitude-modulated
/// by the short-term RMS of the input.
pub fn convert_hapticgen(clip: &AudioClip, cfg: &ConverterConfig) -> Result<VibrationSignal> {
    let clip = prepare(clip)?;
    let (times, freqs, amps) = hapticgen_tracks(&clip, cfg)?;
    let rate = cfg.output_rate;
    let len = output_len(clip.len(), clip.sample_rate, cfg);
    let freq = interpolate_track(&times, &freqs, len, rate);
    let amp = interpolate_track(&times, &amps, len, rate);
    let raw = RawVibration {
        samples: nco_synthesize(&freq, &amp, rate)?,
        sample_rate: rate,
        algorithm: Algorithm::HapticGen,
    };
    let segment_len = ms_to_samples(cfg.hapticgen.window_ms, rate);
    normalize_vibration(&raw, NormalizationStrategy::SegmentMax { segment_len }, cfg)
}
