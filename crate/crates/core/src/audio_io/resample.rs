//! Band-limited resampling with a Kaiser-windowed sinc kernel.
//!
//! The kernel is tabulated once at a fine oversampling factor and linearly
//! interpolated between table points. When downsampling, the kernel is
//! stretched by the rate ratio so its cutoff tracks the output Nyquist.

use std::sync::OnceLock;

use super::AudioClip;
use crate::error::{Error, Result};

/// Zero crossings of the sinc on each side of the kernel centre.
const ZERO_CROSSINGS: usize = 48;
/// Table points per zero crossing.
const OVERSAMPLE: usize = 512;
/// Cutoff as a fraction of the lower Nyquist frequency.
const ROLLOFF: f64 = 0.90;
const KAISER_BETA: f64 = 8.6;

struct SincTable {
    values: Vec<f64>,
    deltas: Vec<f64>,
}

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let half = x / 2.0;
    for k in 1..64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn table() -> &'static SincTable {
    static TABLE: OnceLock<SincTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ZERO_CROSSINGS * OVERSAMPLE;
        let norm = bessel_i0(KAISER_BETA);
        let values: Vec<f64> = (0..=n)
            .map(|i| {
                let u = i as f64 / OVERSAMPLE as f64;
                let x = ROLLOFF * u;
                let sinc = if x == 0.0 {
                    1.0
                } else {
                    (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
                };
                let r = u / ZERO_CROSSINGS as f64;
                let win = bessel_i0(KAISER_BETA * (1.0 - r * r).max(0.0).sqrt()) / norm;
                ROLLOFF * sinc * win
            })
            .collect();
        let mut deltas: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        deltas.push(0.0);
        SincTable { values, deltas }
    })
}

/// Kernel value at `u` zero-crossing units from the centre (`u >= 0`).
#[inline]
fn kernel(tab: &SincTable, u: f64) -> f64 {
    let pos = u * OVERSAMPLE as f64;
    let idx = pos as usize;
    if idx >= tab.values.len() {
        return 0.0;
    }
    tab.values[idx] + (pos - idx as f64) * tab.deltas[idx]
}

/// Interpolate `input` at fractional position `base + frac` with a kernel
/// scaled by `scale` (1 for upsampling, out/in for downsampling).
#[inline]
fn interpolate(tab: &SincTable, input: &[f64], base: usize, frac: f64, scale: f64) -> f64 {
    let reach = ZERO_CROSSINGS as f64 / scale;
    let mut acc = 0.0;

    // left wing: input[base], input[base - 1], ...
    let mut d = frac;
    let mut i = base as isize;
    while d < reach && i >= 0 {
        if let Some(x) = input.get(i as usize) {
            acc += kernel(tab, d * scale) * x;
        }
        d += 1.0;
        i -= 1;
    }
    // right wing: input[base + 1], ...
    let mut d = 1.0 - frac;
    let mut i = base + 1;
    while d < reach && i < input.len() {
        acc += kernel(tab, d * scale) * input[i];
        d += 1.0;
        i += 1;
    }
    acc * scale
}

/// Resample raw samples from `in_rate` to `out_rate` Hz. Output length is
/// `round(len * out_rate / in_rate)`; equal rates return the input unchanged.
pub fn resample_samples(input: &[f64], in_rate: u32, out_rate: u32) -> Result<Vec<f64>> {
    if input.is_empty() {
        return Err(Error::invalid("cannot resample an empty signal"));
    }
    if in_rate == 0 || out_rate == 0 {
        return Err(Error::invalid("sample rates must be positive"));
    }
    if in_rate == out_rate {
        return Ok(input.to_vec());
    }
    let (in_r, out_r) = (in_rate as u64, out_rate as u64);
    let out_len = ((input.len() as u64 * out_r + in_r / 2) / in_r) as usize;
    let scale = (out_rate as f64 / in_rate as f64).min(1.0);
    let tab = table();

    // Exact rational positions avoid drift over long signals.
    Ok((0..out_len as u64)
        .map(|t| {
            let num = t * in_r;
            let base = (num / out_r) as usize;
            let frac = (num % out_r) as f64 / out_r as f64;
            interpolate(tab, input, base, frac, scale)
        })
        .collect())
}

/// Resample an [`AudioClip`] to `target_rate`.
pub fn resample(clip: &AudioClip, target_rate: u32) -> Result<AudioClip> {
    if target_rate == 0 {
        return Err(Error::invalid("target rate must be positive"));
    }
    let samples = resample_samples(&clip.samples, clip.sample_rate, target_rate)?;
    Ok(AudioClip {
        samples,
        sample_rate: target_rate,
        source_id: clip.source_id.clone(),
    })
}

/// Band-limited change of playback speed: read `input` at `step` input
/// samples per output sample, producing `out_len` samples. `step > 1`
/// compresses time (raising pitch), `step < 1` expands it.
pub fn stretch_samples(input: &[f64], step: f64, out_len: usize) -> Result<Vec<f64>> {
    if input.is_empty() {
        return Err(Error::invalid("cannot resample an empty signal"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid(format!("invalid resampling step {step}")));
    }
    let scale = (1.0 / step).min(1.0);
    let tab = table();
    Ok((0..out_len)
        .map(|t| {
            let pos = t as f64 * step;
            let base = pos.floor();
            if base as usize >= input.len() + ZERO_CROSSINGS * 2 {
                return 0.0;
            }
            interpolate(tab, input, base as usize, pos - base, scale)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustfft::{num_complex::Complex, FftPlanner};
    use std::f64::consts::PI;

    fn sine(freq: f64, rate: u32, len: usize) -> Vec<f64> {
        (0..len)
            .map(|n| (2.0 * PI * freq * n as f64 / rate as f64).sin())
            .collect()
    }

    /// Magnitude spectrum of a Hann-windowed block, independent of crate DSP.
    fn spectrum(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut buf: Vec<Complex<f64>> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos();
                Complex::new(v * w, 0.0)
            })
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        buf[..n / 2 + 1].iter().map(|c| c.norm()).collect()
    }

    #[test]
    fn output_length_ratio() {
        let x = vec![0.1; 220500];
        let y = resample_samples(&x, 44100, 24000).unwrap();
        assert_eq!(y.len(), 120000);
    }

    #[test]
    fn identity_rate_is_bit_identical() {
        let x = sine(440.0, 44100, 1000);
        let clip = AudioClip::new(x.clone(), 44100);
        assert_eq!(resample(&clip, 44100).unwrap().samples, x);
    }

    #[test]
    fn tone_peak_survives_downsampling() {
        let x = sine(1000.0, 44100, 44100);
        let y = resample_samples(&x, 44100, 8000).unwrap();
        let block = &y[1000..1000 + 4096];
        let mag = spectrum(block);
        let peak = mag.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let expected = (1000.0 * 4096.0 / 8000.0_f64).round() as usize;
        assert!(peak.abs_diff(expected) <= 1, "peak bin {peak}");
    }

    #[test]
    fn aliases_attenuated_60_db() {
        // 5 kHz is above the 4 kHz output Nyquist; it would fold to 3 kHz.
        let alias_in = sine(5000.0, 44100, 44100);
        let ref_in = sine(3000.0, 44100, 44100);
        let a = resample_samples(&alias_in, 44100, 8000).unwrap();
        let r = resample_samples(&ref_in, 44100, 8000).unwrap();
        let rms = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
        let ratio_db = 20.0 * (rms(&a[800..7200]) / rms(&r[800..7200])).log10();
        assert!(ratio_db < -60.0, "alias only {ratio_db:.1} dB down");
    }

    #[test]
    fn rejects_empty() {
        assert!(resample_samples(&[], 44100, 8000).is_err());
    }

    #[test]
    fn stretch_halves_frequency() {
        let x = sine(400.0, 8000, 8000);
        let y = stretch_samples(&x, 0.5, 16000).unwrap();
        let mag = spectrum(&y[4000..4000 + 8192]);
        let peak = mag.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let hz = peak as f64 * 8000.0 / 8192.0;
        assert!((hz - 200.0).abs() < 2.0, "{hz}");
    }

    #[test]
    fn stretch_reads_past_the_end() {
        let x = sine(400.0, 8000, 100);
        let y = stretch_samples(&x, 2.0, 80).unwrap();
        assert_eq!(y.len(), 80);
        assert!(y.iter().all(|v| v.is_finite()));
    }
}
