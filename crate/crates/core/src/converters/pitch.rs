use super::{
    ms_to_samples, normalize_vibration, output_len, prepare, ConverterConfig, NormalizationStrategy, RawVibration,
};
use crate::algorithm::Algorithm;
use crate::audio_io::{AudioClip, VibrationSignal};
use crate::dsp::{interpolate_track, nco_synthesize};
use crate::error::{Error, Result};
use crate::psychoacoustics::{specific_loudness_bark, BARK_BANDS, MIN_LOUDNESS_FRAME};

/// Per-window frequency and amplitude control points.
#[derive(Debug, Clone, PartialEq)]
pub struct PitchTracks {
    /// Window centres in seconds.
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    /// Total loudness of each window in sones.
    pub amps: Vec<f64>,
}

/// Control points for pitch matching, computed on `clip` as given.
///
/// Windows shorter than the loudness analysis minimum (under 25.6 kHz for
/// 10 ms) are analysed over a longer frame centred on the same point; the
/// hop is unchanged. Silent windows take the frequency of the nearest
/// non-silent one.
pub fn pitch_tracks(clip: &AudioClip, cfg: &ConverterConfig) -> Result<PitchTracks> {
    let c = &cfg.pitch;
    let fs = clip.sample_rate;
    let win = ms_to_samples(c.window_ms, fs);
    if clip.len() < win {
        return Err(Error::TooShort {
            needed: win,
            got: clip.len(),
        });
    }
    let hop = ((win as f64 * (1.0 - c.overlap)).round() as usize).max(1);
    let frame_len = win.max(MIN_LOUDNESS_FRAME);
    let (weights, intercept) = c.regression_coeffs.split_at(BARK_BANDS);

    let n_windows = (clip.len() - win) / hop + 1;
    let mut times = Vec::with_capacity(n_windows);
    let mut predicted: Vec<Option<f64>> = Vec::with_capacity(n_windows);
    let mut amps = Vec::with_capacity(n_windows);
    let mut frame = vec![0.0; frame_len];
    for i in 0..n_windows {
        let centre2 = 2 * i * hop + win; // twice the centre, in samples
        let start = centre2 as isize / 2 - frame_len as isize / 2;
        for (k, v) in frame.iter_mut().enumerate() {
            let idx = start + k as isize;
            *v = if idx >= 0 {
                clip.samples.get(idx as usize).copied().unwrap_or(0.0)
            } else {
                0.0
            };
        }
        let bands = specific_loudness_bark(&frame, fs, &cfg.psycho)?;
        let total: f64 = bands.iter().sum();
        times.push(centre2 as f64 / (2.0 * fs as f64));
        amps.push(total);
        predicted.push((total > 0.0).then(|| {
            let f = intercept[0] + weights.iter().zip(&bands).map(|(w, b)| w * b / total).sum::<f64>();
            f.clamp(c.f_min, c.f_max)
        }));
    }

    Ok(PitchTracks {
        times,
        freqs: fill_nearest(&predicted, c.f_min),
        amps,
    })
}

/// Replace gaps by the nearest defined value (earlier one on ties).
fn fill_nearest(values: &[Option<f64>], fallback: f64) -> Vec<f64> {
    let defined: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    if defined.is_empty() {
        return vec![fallback; values.len()];
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.unwrap_or_else(|| {
                let j = defined.partition_point(|&d| d < i);
                let nearest = match (j.checked_sub(1).map(|k| defined[k]), defined.get(j)) {
                    (Some(l), Some(&r)) if r - i < i - l => r,
                    (Some(l), _) => l,
                    (None, Some(&r)) => r,
                    (None, None) => unreachable!(),
                };
                values[nearest].unwrap()
            })
        })
        .collect()
}

/// Pitch matching: one sinusoid whose frequency follows the Bark loudness
/// distribution and whose amplitude follows total loudness.
pub fn convert_pitch(clip: &AudioClip, cfg: &ConverterConfig) -> Result<VibrationSignal> {
    let clip = prepare(clip)?;
    let tracks = pitch_tracks(&clip, cfg)?;
    let rate = cfg.output_rate;
    let len = output_len(clip.len(), clip.sample_rate, cfg);
    let freq = interpolate_track(&tracks.times, &tracks.freqs, len, rate);
    let amp = interpolate_track(&tracks.times, &tracks.amps, len, rate);
    let raw = RawVibration {
        samples: nco_synthesize(&freq, &amp, rate)?,
        sample_rate: rate,
        algorithm: Algorithm::Pitch,
    };
    let segment_len = ms_to_samples(cfg.pitch.window_ms, rate);
    normalize_vibration(&raw, NormalizationStrategy::SegmentMax { segment_len }, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio_io::rms;
    use std::f64::consts::PI;

    fn sine(freq: f64, n: usize, fs: u32) -> Vec<f64> {
        (0..n)
            .map(|i| 0.5 * (2.0 * PI * freq * i as f64 / fs as f64).sin())
            .collect()
    }

    #[test]
    fn stationary_tone_gives_constant_frequency() {
        let cfg = ConverterConfig::default();
        let t = pitch_tracks(&AudioClip::new(sine(1000.0, 22050, 44100), 44100), &cfg).unwrap();
        let min = t.freqs.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = t.freqs.iter().cloned().fold(0.0, f64::max);
        assert!(max - min <= 2.0, "{min} {max}");
    }

    #[test]
    fn brighter_input_maps_higher() {
        let cfg = ConverterConfig::default();
        let lo = pitch_tracks(&AudioClip::new(sine(200.0, 4410, 44100), 44100), &cfg).unwrap();
        let hi = pitch_tracks(&AudioClip::new(sine(5000.0, 4410, 44100), 44100), &cfg).unwrap();
        assert!(hi.freqs[5] > lo.freqs[5] + 100.0);
    }

    #[test]
    fn silent_gap_is_quiet_and_keeps_frequency() {
        let cfg = ConverterConfig::default();
        let mut x = sine(800.0, 22050, 44100);
        x.extend(vec![0.0; 22050]);
        x.extend(sine(800.0, 22050, 44100));
        let clip = AudioClip::new(x, 44100);
        let t = pitch_tracks(&clip, &cfg).unwrap();
        let mid = t.times.iter().position(|&s| s > 0.75).unwrap();
        assert_eq!(t.amps[mid], 0.0);
        let before = t.amps[..mid].iter().rposition(|&a| a > 0.0).unwrap();
        let after = mid + t.amps[mid..].iter().position(|&a| a > 0.0).unwrap();
        let nearest = if after - mid < mid - before { after } else { before };
        assert_eq!(t.freqs[mid], t.freqs[nearest]);

        let v = convert_pitch(&clip, &cfg).unwrap();
        assert_eq!(v.len(), 12000);
        assert!(rms(&v.samples[5200..6800]) < 1e-3 * rms(&v.samples[..4000]));
    }

    #[test]
    fn low_rate_input_uses_longer_frames() {
        let cfg = ConverterConfig::default();
        let v = convert_pitch(&AudioClip::new(sine(300.0, 8000, 8000), 8000), &cfg).unwrap();
        assert_eq!(v.len(), 8000);
    }

    #[test]
    fn nearest_fill() {
        let v = fill_nearest(&[None, Some(1.0), None, None, None, Some(2.0), None], 0.0);
        assert_eq!(v, vec![1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(fill_nearest(&[None, None], 7.0), vec![7.0, 7.0]);
    }
}
