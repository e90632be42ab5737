//! Spectral and filtering primitives shared by the converters, feature
//! extraction and metrics.

mod filter;
mod mel;
mod nco;
mod pitch_shift;
mod stft;
mod tracking;

pub use filter::{butterworth_filter, BiquadCascade, FilterKind, FilterSpec};
pub use mel::{hz_to_mel, mel_to_hz, MelFilterbank};
pub use nco::nco_synthesize;
pub use pitch_shift::{pitch_shift, time_stretch, MAX_SHIFT_SEMITONES};
pub use stft::{stft, Spectrogram};
pub use tracking::{frame_rms, instantaneous_frequency, interpolate_track};

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Periodic Hann window of length `n`.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

type PlanCache = (FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>);

thread_local! {
    static PLANS: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

pub(crate) fn fft_plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// One-sided complex spectrum of `frame * window`, zero-padded to `n_fft`.
pub(crate) fn windowed_spectrum(frame: &[f64], window: &[f64], n_fft: usize) -> Vec<Complex<f64>> {
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    for ((b, &x), &w) in buf.iter_mut().zip(frame).zip(window) {
        b.re = x * w;
    }
    fft_plan(n_fft, false).process(&mut buf);
    buf.truncate(n_fft / 2 + 1);
    buf
}

/// One-sided power spectrum with a Hann window over the whole frame, scaled
/// so the bins of a sinusoid of amplitude `a` sum to `a^2 / 2`.
pub(crate) fn power_spectrum(frame: &[f64]) -> (Vec<f64>, usize) {
    let n_fft = frame.len().next_power_of_two();
    let window = hann(frame.len());
    let spec = windowed_spectrum(frame, &window, n_fft);
    let wsq: f64 = window.iter().map(|w| w * w).sum();
    let norm = 1.0 / (n_fft as f64 * wsq);
    let last = spec.len() - 1;
    let power = spec
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let both_sides = if k == 0 || k == last { 1.0 } else { 2.0 };
            both_sides * c.norm_sqr() * norm
        })
        .collect();
    (power, n_fft)
}
