use serde::Serialize;

use crate::audio_io::rms;
use crate::dsp::{stft, MelFilterbank, Spectrogram};
use crate::error::{Error, Result};

pub const STFT_SIZES: [usize; 3] = [1024, 512, 256];
pub const MEL_BANDS: usize = 64;
pub const MEL_FFT: usize = 1024;
pub const MEL_HOP: usize = 256;
/// Floor inside every logarithm so silence compared with silence is 0.
pub const LOG_EPS: f64 = 1e-7;

/// Distances between a predicted and a target waveform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub mse: f64,
    /// Mean over the three resolutions of spectral convergence plus
    /// log-magnitude L1.
    pub stft_loss: f64,
    pub mel_l1: f64,
    /// Absolute RMS difference.
    pub amp_loss: f64,
    pub rmse: f64,
}

pub fn mse(pred: &[f64], target: &[f64]) -> Result<f64> {
    check_lengths(pred, target)?;
    if pred.is_empty() {
        return Err(Error::invalid("cannot compare empty signals"));
    }
    let mut sum = 0.0;
    for (p, t) in pred.iter().zip(target) {
        sum += (p - t) * (p - t);
    }
    Ok(sum / pred.len() as f64)
}

fn check_lengths(pred: &[f64], target: &[f64]) -> Result<()> {
    if pred.len() != target.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: target.len(),
        });
    }
    Ok(())
}

/// Zero-pad signals shorter than one frame.
fn spectrogram(x: &[f64], rate: u32, fft: usize, hop: usize) -> Result<Spectrogram> {
    if x.len() >= fft {
        return stft(x, rate, fft, hop);
    }
    let mut padded = x.to_vec();
    padded.resize(fft, 0.0);
    stft(&padded, rate, fft, hop)
}

fn mean_log_l1(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| ((x + LOG_EPS).ln() - (y + LOG_EPS).ln()).abs())
        .sum();
    sum / a.len() as f64
}

pub fn stft_loss(pred: &[f64], target: &[f64], sample_rate: u32) -> Result<f64> {
    check_lengths(pred, target)?;
    let mut total = 0.0;
    for fft in STFT_SIZES {
        let sp = spectrogram(pred, sample_rate, fft, fft / 4)?;
        let st = spectrogram(target, sample_rate, fft, fft / 4)?;
        let (p, t) = (sp.as_slice(), st.as_slice());
        let diff = p.iter().zip(t).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt();
        let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        let convergence = if diff == 0.0 { 0.0 } else { diff / norm.max(LOG_EPS) };
        total += convergence + mean_log_l1(t, p);
    }
    Ok(total / STFT_SIZES.len() as f64)
}

pub fn mel_l1(pred: &[f64], target: &[f64], sample_rate: u32) -> Result<f64> {
    check_lengths(pred, target)?;
    let fb = MelFilterbank::new(MEL_BANDS, MEL_FFT, sample_rate, 0.0, sample_rate as f64 / 2.0)?;
    let sp = spectrogram(pred, sample_rate, MEL_FFT, MEL_HOP)?;
    let st = spectrogram(target, sample_rate, MEL_FFT, MEL_HOP)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (fp, ft) in sp.frames().zip(st.frames()) {
        let (mp, mt) = (fb.apply(fp), fb.apply(ft));
        sum += mean_log_l1(&mt, &mp) * mp.len() as f64;
        count += mp.len();
    }
    Ok(sum / count as f64)
}

/// All five distances between `pred` and `target` (equal length, same rate).
pub fn reconstruction_metrics(pred: &[f64], target: &[f64], sample_rate: u32) -> Result<MetricReport> {
    let mse = mse(pred, target)?;
    Ok(MetricReport {
        mse,
        stft_loss: stft_loss(pred, target, sample_rate)?,
        mel_l1: mel_l1(pred, target, sample_rate)?,
        amp_loss: (rms(pred) - rms(target)).abs(),
        rmse: mse.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceComparison {
    /// RMSE against each reference, in input order.
    pub rmse: Vec<(String, f64)>,
    /// Label of the closest reference (first on ties).
    pub best: String,
}

/// RMSE of `generated` against each labelled reference. Each pair is
/// zero-padded to the longer of the two before comparison.
pub fn compare_to_references(generated: &[f64], refs: &[(String, Vec<f64>)]) -> Result<ReferenceComparison> {
    if refs.is_empty() {
        return Err(Error::invalid("empty reference set"));
    }
    let mut rmse = Vec::with_capacity(refs.len());
    for (label, r) in refs {
        let len = generated.len().max(r.len());
        if len == 0 {
            return Err(Error::invalid(format!(
                "reference '{label}' and generated signal are both empty"
            )));
        }
        let at = |x: &[f64], i: usize| x.get(i).copied().unwrap_or(0.0);
        let mut sum = 0.0;
        for i in 0..len {
            let d = at(generated, i) - at(r, i);
            sum += d * d;
        }
        rmse.push((label.clone(), (sum / len as f64).sqrt()));
    }
    let best = rmse
        .iter()
        .fold(&rmse[0], |b, c| if c.1 < b.1 { c } else { b })
        .0
        .clone();
    Ok(ReferenceComparison { rmse, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-0.5..0.5)).collect()
    }

    #[test]
    fn identical_inputs_are_zero() {
        let x = noise(1, 4000);
        let m = reconstruction_metrics(&x, &x, 8000).unwrap();
        assert!(m.mse <= 1e-12);
        for v in [m.stft_loss, m.mel_l1, m.amp_loss, m.rmse] {
            assert!(v <= 1e-6, "{m:?}");
        }
        let z = vec![0.0; 500];
        let m = reconstruction_metrics(&z, &z, 8000).unwrap();
        assert_eq!((m.stft_loss, m.mel_l1), (0.0, 0.0));
    }

    #[test]
    fn constant_offset() {
        let x = noise(2, 1000);
        let y: Vec<f64> = x.iter().map(|v| v + 0.1).collect();
        let m = reconstruction_metrics(&y, &x, 8000).unwrap();
        assert!((m.mse - 0.01).abs() < 1e-12);
        assert!((m.rmse - 0.1).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            reconstruction_metrics(&[0.0; 10], &[0.0; 11], 8000),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn silence_against_signal_is_finite() {
        let x = noise(3, 2000);
        let z = vec![0.0; 2000];
        for m in [
            reconstruction_metrics(&x, &z, 8000).unwrap(),
            reconstruction_metrics(&z, &x, 8000).unwrap(),
        ] {
            assert!([m.mse, m.stft_loss, m.mel_l1, m.amp_loss, m.rmse]
                .iter()
                .all(|v| v.is_finite() && *v > 0.0));
        }
    }

    #[test]
    fn references() {
        let g = noise(4, 100);
        let refs = vec![
            ("zero".to_string(), vec![0.0; 100]),
            ("self".to_string(), g.clone()),
            ("short".to_string(), g[..50].to_vec()),
        ];
        let c = compare_to_references(&g, &refs).unwrap();
        assert_eq!(c.best, "self");
        assert_eq!(c.rmse[1].1, 0.0);
        assert!((c.rmse[0].1 - rms(&g)).abs() < 1e-12);
        let tail = (g[50..].iter().map(|v| v * v).sum::<f64>() / 100.0).sqrt();
        assert!((c.rmse[2].1 - tail).abs() < 1e-12);
        assert!(compare_to_references(&g, &[]).is_err());
    }
}
