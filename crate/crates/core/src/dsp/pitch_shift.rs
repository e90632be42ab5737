//! Phase-vocoder time stretching and pitch shifting.
//!
//! Pitch shifting stretches time by the pitch ratio with the phase vocoder,
//! then resamples back to the original length, which scales every frequency
//! by the ratio while keeping duration.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex;

use super::{fft_plan, hann, windowed_spectrum};
use crate::audio_io::{stretch_samples, AudioClip};
use crate::error::{Error, Result};

pub const MAX_SHIFT_SEMITONES: f64 = 24.0;

/// Analysis FFT size: 2048 at 44.1 kHz, scaled to the nearest power of two
/// at other rates (rounded in the log domain) so the window stays near 46 ms.
fn fft_size_for(sample_rate: u32) -> usize {
    let ideal = 2048.0 * sample_rate as f64 / 44100.0;
    (ideal.log2().round().exp2() as usize).max(256)
}

fn wrap_phase(p: f64) -> f64 {
    p - TAU * (p / TAU).round()
}

/// Change duration by `1 / rate` without changing pitch (`rate > 1` is
/// faster). Hann window, `n_fft` analysis size, 75 % overlap. The result has
/// `round(len / rate)` samples.
pub fn time_stretch(signal: &[f64], rate: f64, n_fft: usize) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(Error::invalid("cannot stretch an empty signal"));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::invalid(format!("invalid stretch rate {rate}")));
    }
    let hop = n_fft / 4;
    let out_len = (signal.len() as f64 / rate).round() as usize;

    // centre the first frame on sample 0
    let pad = n_fft / 2;
    let mut padded = vec![0.0; signal.len() + 2 * pad];
    padded[pad..pad + signal.len()].copy_from_slice(signal);
    let window = hann(n_fft);
    let n_frames = 1 + (padded.len() - n_fft) / hop;
    let frames: Vec<Vec<Complex<f64>>> = (0..n_frames)
        .map(|f| windowed_spectrum(&padded[f * hop..f * hop + n_fft], &window, n_fft))
        .collect();
    let n_bins = n_fft / 2 + 1;
    let silent = vec![Complex::new(0.0, 0.0); n_bins];
    let frame_at = |i: usize| frames.get(i).unwrap_or(&silent);

    let advance: Vec<f64> = (0..n_bins)
        .map(|k| TAU * k as f64 * hop as f64 / n_fft as f64)
        .collect();
    let mut phase: Vec<f64> = frames[0].iter().map(|c| c.arg()).collect();

    let n_steps = (n_frames as f64 / rate).ceil() as usize;
    let ifft = fft_plan(n_fft, true);
    let y_len = n_fft + hop * n_steps.saturating_sub(1);
    let mut y = vec![0.0; y_len];
    let mut wsum = vec![0.0; y_len];
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];

    for step in 0..n_steps {
        let t = step as f64 * rate;
        let i = t.floor() as usize;
        let alpha = t - i as f64;
        let (c0, c1) = (frame_at(i), frame_at(i + 1));

        for k in 0..n_bins {
            let mag = (1.0 - alpha) * c0[k].norm() + alpha * c1[k].norm();
            buf[k] = Complex::from_polar(mag, phase[k]);
            let dphi = wrap_phase(c1[k].arg() - c0[k].arg() - advance[k]);
            phase[k] += advance[k] + dphi;
        }
        for k in 1..n_fft - n_bins + 1 {
            buf[n_fft - k] = buf[k].conj();
        }
        ifft.process(&mut buf);

        let start = step * hop;
        for n in 0..n_fft {
            y[start + n] += buf[n].re / n_fft as f64 * window[n];
            wsum[start + n] += window[n] * window[n];
        }
    }

    let floor = f64::EPSILON.sqrt();
    Ok((0..out_len)
        .map(|n| {
            let idx = n + pad;
            match (y.get(idx), wsum.get(idx)) {
                (Some(&v), Some(&w)) if w > floor => v / w,
                (Some(&v), Some(_)) => v,
                _ => 0.0,
            }
        })
        .collect())
}

/// Shift pitch by `semitones` (negative lowers) keeping the clip's length.
pub fn pitch_shift(clip: &AudioClip, semitones: f64) -> Result<AudioClip> {
    if clip.is_empty() {
        return Err(Error::invalid("cannot pitch-shift an empty clip"));
    }
    if !(semitones.abs() <= MAX_SHIFT_SEMITONES) {
        return Err(Error::invalid(format!(
            "shift of {semitones} semitones exceeds ±{MAX_SHIFT_SEMITONES}"
        )));
    }
    if semitones == 0.0 {
        return Ok(clip.clone());
    }
    let ratio = 2f64.powf(semitones / 12.0);
    let n_fft = fft_size_for(clip.sample_rate);
    let stretched = time_stretch(&clip.samples, 1.0 / ratio, n_fft)?;
    let samples = stretch_samples(&stretched, ratio, clip.len())?;
    Ok(clip.with_samples(samples))
}
