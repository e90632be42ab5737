use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio_io::AudioClip;
use crate::dsp::{stft, MelFilterbank, Spectrogram};
use crate::error::{Error, Result};

pub const FEATURE_DIM: usize = 31;
pub const N_MFCC: usize = 13;
pub const N_CHROMA: usize = 12;

const FFT_SIZE: usize = 2048;
const HOP: usize = 512;
const N_MEL: usize = 26;
const ROLLOFF: f64 = 0.85;
const TEMPO_MIN: f64 = 30.0;
const TEMPO_MAX: f64 = 300.0;
const TEMPO_FALLBACK: f64 = 120.0;

/// Clip-averaged acoustic descriptor used to spread curated samples across
/// acoustically distinct regions of a class.
///
/// Chroma index 0 is C and 9 is A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub centroid: f64,
    pub rolloff: f64,
    pub bandwidth: f64,
    pub rms_energy: f64,
    pub zcr: f64,
    pub tempo: f64,
    pub mfcc: [f64; N_MFCC],
    pub chroma: [f64; N_CHROMA],
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_DIM] {
        let mut out = [0.0; FEATURE_DIM];
        out[..6].copy_from_slice(&[
            self.centroid,
            self.rolloff,
            self.bandwidth,
            self.rms_energy,
            self.zcr,
            self.tempo,
        ]);
        out[6..6 + N_MFCC].copy_from_slice(&self.mfcc);
        out[6 + N_MFCC..].copy_from_slice(&self.chroma);
        out
    }
}

/// Compute the 31 clip-level features. Frame features use a 2048-point Hann
/// STFT with hop 512 and are averaged over frames.
pub fn extract_features(clip: &AudioClip) -> Result<FeatureVector> {
    let fs = clip.sample_rate;
    let needed = (fs as usize).max(FFT_SIZE);
    if clip.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: clip.len(),
        });
    }
    let spec = stft(&clip.samples, fs, FFT_SIZE, HOP)?;
    let (centroid, rolloff, bandwidth) = spectral_shape(&spec);

    let n_frames = spec.n_frames();
    let frames = (0..n_frames).map(|f| &clip.samples[f * HOP..f * HOP + FFT_SIZE]);
    let mut rms_sum = 0.0;
    let mut zcr_sum = 0.0;
    for frame in frames {
        rms_sum += (frame.iter().map(|x| x * x).sum::<f64>() / FFT_SIZE as f64).sqrt();
        let crossings = frame.windows(2).filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0)).count();
        zcr_sum += crossings as f64 / FFT_SIZE as f64;
    }

    Ok(FeatureVector {
        centroid,
        rolloff,
        bandwidth,
        rms_energy: rms_sum / n_frames as f64,
        zcr: zcr_sum / n_frames as f64,
        tempo: estimate_tempo(&spec),
        mfcc: mfcc(&spec)?,
        chroma: chroma(&spec),
    })
}

/// Mean centroid, 85 % rolloff and bandwidth over frames that carry energy.
fn spectral_shape(spec: &Spectrogram) -> (f64, f64, f64) {
    let freqs: Vec<f64> = (0..spec.n_bins()).map(|k| spec.bin_hz(k)).collect();
    let (mut c_sum, mut r_sum, mut b_sum, mut count) = (0.0, 0.0, 0.0, 0usize);
    for mag in spec.frames() {
        let total: f64 = mag.iter().sum();
        if !(total > 0.0) {
            continue;
        }
        let centroid = mag.iter().zip(&freqs).map(|(m, f)| m * f).sum::<f64>() / total;
        let spread = mag
            .iter()
            .zip(&freqs)
            .map(|(m, f)| m * (f - centroid).powi(2))
            .sum::<f64>()
            / total;
        let mut cum = 0.0;
        let k = mag
            .iter()
            .position(|m| {
                cum += m;
                cum >= ROLLOFF * total
            })
            .unwrap_or(mag.len() - 1);
        c_sum += centroid;
        r_sum += freqs[k];
        b_sum += spread.sqrt();
        count += 1;
    }
    if count == 0 {
        return (0.0, 0.0, 0.0);
    }
    let n = count as f64;
    (c_sum / n, r_sum / n, b_sum / n)
}

/// Tempo from the autocorrelation of a spectral-flux onset envelope: the
/// lag with the largest (biased) autocorrelation between 30 and 300 BPM,
/// refined parabolically. Clips without periodic onsets get 120 BPM.
fn estimate_tempo(spec: &Spectrogram) -> f64 {
    let frames: Vec<&[f64]> = spec.frames().collect();
    let onset: Vec<f64> = frames
        .windows(2)
        .map(|w| {
            w[1].iter()
                .zip(w[0])
                .map(|(b, a)| (b.ln_1p() - a.ln_1p()).max(0.0))
                .sum()
        })
        .collect();
    if onset.len() < 3 {
        return TEMPO_FALLBACK;
    }
    let mean = onset.iter().sum::<f64>() / onset.len() as f64;
    let env: Vec<f64> = onset.iter().map(|v| v - mean).collect();
    let n = env.len();
    let frame_rate = spec.sample_rate as f64 / spec.hop as f64;
    let lag_min = ((60.0 * frame_rate / TEMPO_MAX).ceil() as usize).max(1);
    let lag_max = ((60.0 * frame_rate / TEMPO_MIN).floor() as usize).min(n - 2);
    if lag_min > lag_max {
        return TEMPO_FALLBACK;
    }
    let ac = |lag: usize| env[..n - lag].iter().zip(&env[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64;
    let (best, value) = (lag_min..=lag_max)
        .map(|l| (l, ac(l)))
        .fold((0, 0.0), |acc, (l, v)| if v > acc.1 { (l, v) } else { acc });
    if best == 0 || !(value > 0.0) {
        return TEMPO_FALLBACK;
    }
    let (a, b, c) = (ac(best - 1), value, ac(best + 1));
    let denom = a - 2.0 * b + c;
    let delta = if denom < 0.0 {
        (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    (60.0 * frame_rate / (best as f64 + delta)).clamp(TEMPO_MIN, TEMPO_MAX)
}

/// Frame-averaged MFCCs 1 to 13 from 26 HTK mel filters over the power
/// spectrum, log energies and an orthonormal DCT-II.
fn mfcc(spec: &Spectrogram) -> Result<[f64; N_MFCC]> {
    let fb = MelFilterbank::new(
        N_MEL,
        spec.fft_size,
        spec.sample_rate,
        0.0,
        spec.sample_rate as f64 / 2.0,
    )?;
    let dct: Vec<Vec<f64>> = (1..=N_MFCC)
        .map(|q| {
            let scale = (2.0 / N_MEL as f64).sqrt();
            (0..N_MEL)
                .map(|m| scale * (std::f64::consts::PI * q as f64 * (m as f64 + 0.5) / N_MEL as f64).cos())
                .collect()
        })
        .collect();
    let mut acc = [0.0; N_MFCC];
    let mut power = vec![0.0; spec.n_bins()];
    for mag in spec.frames() {
        for (p, m) in power.iter_mut().zip(mag) {
            *p = m * m;
        }
        let log_mel: Vec<f64> = fb.apply(&power).iter().map(|e| (e + 1e-10).ln()).collect();
        for (a, row) in acc.iter_mut().zip(&dct) {
            *a += row.iter().zip(&log_mel).map(|(d, l)| d * l).sum::<f64>();
        }
    }
    let n = spec.n_frames() as f64;
    Ok(acc.map(|a| a / n))
}

/// Power folded onto the nearest equal-tempered pitch class (A4 = 440 Hz)
/// for bins from 27.5 Hz up, averaged over frames, then L2-normalized.
fn chroma(spec: &Spectrogram) -> [f64; N_CHROMA] {
    let classes: Vec<Option<usize>> = (0..spec.n_bins())
        .map(|k| {
            let f = spec.bin_hz(k);
            (f >= 27.5).then(|| {
                let semis = (12.0 * (f / 440.0).log2()).round() as i64;
                (semis + 9).rem_euclid(12) as usize
            })
        })
        .collect();
    let mut acc = [0.0; N_CHROMA];
    for mag in spec.frames() {
        for (m, class) in mag.iter().zip(&classes) {
            if let Some(c) = class {
                acc[*c] += m * m;
            }
        }
    }
    let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        acc.map(|v| v / norm)
    } else {
        acc
    }
}

/// Write feature vectors as one JSON object keyed by clip id.
pub fn write_features_json(features: &BTreeMap<String, FeatureVector>, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(features).map_err(|e| Error::Validation(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_features_json(path: &Path) -> Result<BTreeMap<String, FeatureVector>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    const FS: u32 = 44100;

    fn sine(freq: f64, secs: f64, amp: f64) -> AudioClip {
        let n = (secs * FS as f64) as usize;
        AudioClip::new(
            (0..n)
                .map(|i| amp * (2.0 * PI * freq * i as f64 / FS as f64).sin())
                .collect(),
            FS,
        )
    }

    #[test]
    fn sine_centroid_and_chroma() {
        let f = extract_features(&sine(440.0, 2.0, 0.5)).unwrap();
        assert!((f.centroid - 440.0).abs() <= 5.0, "{}", f.centroid);
        let argmax = (0..12).max_by(|&a, &b| f.chroma[a].total_cmp(&f.chroma[b])).unwrap();
        assert_eq!(argmax, 9);
        assert_eq!(f.to_array().len(), FEATURE_DIM);
    }

    #[test]
    fn click_train_tempo() {
        // 120 clicks per minute: one every half second, 6 s long
        let mut x = vec![0.0; 6 * FS as usize];
        for c in 0..12 {
            let at = c * FS as usize / 2 + 1000;
            for j in 0..40 {
                x[at + j] = if j % 2 == 0 { 0.9 } else { -0.9 } * (1.0 - j as f64 / 40.0);
            }
        }
        let f = extract_features(&AudioClip::new(x, FS)).unwrap();
        assert!((f.tempo - 120.0).abs() <= 5.0, "{}", f.tempo);
    }

    #[test]
    fn white_noise_zcr() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..FS as usize)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                0.3 * z
            })
            .collect();
        let f = extract_features(&AudioClip::new(x, FS)).unwrap();
        assert!((f.zcr - 0.5).abs() <= 0.05, "{}", f.zcr);
        assert!((30.0..=300.0).contains(&f.tempo));
    }

    #[test]
    fn gain_scales_rms_only() {
        let base = sine(330.0, 1.5, 0.2);
        let loud = base.with_samples(base.samples.iter().map(|s| s * 3.0).collect());
        let (a, b) = (extract_features(&base).unwrap(), extract_features(&loud).unwrap());
        assert!((b.rms_energy - 3.0 * a.rms_energy).abs() < 1e-9);
        for (x, y) in a.chroma.iter().zip(&b.chroma) {
            assert!((x - y).abs() < 1e-6);
        }
        assert!((a.centroid - b.centroid).abs() < 1e-6);
        assert!(a.chroma.iter().all(|&c| c >= 0.0));
    }

    #[test]
    fn deterministic_and_length_checked() {
        let clip = sine(1000.0, 1.0, 0.4);
        assert_eq!(extract_features(&clip).unwrap(), extract_features(&clip).unwrap());
        assert!(matches!(
            extract_features(&sine(1000.0, 0.5, 0.4)),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        let mut map = BTreeMap::new();
        map.insert("a".to_string(), extract_features(&sine(500.0, 1.0, 0.3)).unwrap());
        write_features_json(&map, &path).unwrap();
        assert_eq!(read_features_json(&path).unwrap(), map);
    }
}
