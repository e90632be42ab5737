use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Sinusoidal numerically controlled oscillator.
///
/// `out[n] = amp[n] * sin(phase[n])` with `phase[0] = 0` and
/// `phase[n + 1] = phase[n] + 2π · freq[n] / sample_rate`. The phase is never
/// reset, so frequency changes do not introduce discontinuities.
pub fn nco_synthesize(freq_track: &[f64], amp_track: &[f64], sample_rate: u32) -> Result<Vec<f64>> {
    if freq_track.len() != amp_track.len() {
        return Err(Error::LengthMismatch {
            left: freq_track.len(),
            right: amp_track.len(),
        });
    }
    let fs = sample_rate as f64;
    let nyquist = fs / 2.0;
    if let Some(f) = freq_track.iter().find(|&&f| !(f > 0.0 && f < nyquist)) {
        return Err(Error::invalid(format!("NCO frequency {f} Hz outside (0, {nyquist})")));
    }
    if amp_track.iter().any(|&a| !(a >= 0.0)) {
        return Err(Error::invalid("NCO amplitude must be non-negative"));
    }

    let mut phase = 0.0_f64;
    Ok(freq_track
        .iter()
        .zip(amp_track)
        .map(|(&f, &a)| {
            let out = a * phase.sin();
            // wrapping keeps sin() accurate on long signals
            phase = (phase + TAU * f / fs).rem_euclid(TAU);
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::instantaneous_frequency;

    fn zero_crossings(x: &[f64]) -> usize {
        x.windows(2)
            .filter(|w| (w[0] < 0.0 && w[1] >= 0.0) || (w[0] >= 0.0 && w[1] < 0.0))
            .count()
    }

    #[test]
    fn constant_tone_crossings() {
        let y = nco_synthesize(&[200.0; 8000], &[1.0; 8000], 8000).unwrap();
        let c = zero_crossings(&y) as i64;
        assert!((c - 400).abs() <= 2, "{c}");
        assert_eq!(y[0], 0.0);
    }

    #[test]
    fn zero_amplitude_is_silent() {
        let y = nco_synthesize(&[200.0; 100], &[0.0; 100], 8000).unwrap();
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ramp_mean_frequency() {
        let n = 8000;
        let f: Vec<f64> = (0..n).map(|i| 100.0 + 200.0 * i as f64 / n as f64).collect();
        let y = nco_synthesize(&f, &vec![1.0; n], 8000).unwrap();
        // oracle: number of cycles = crossing count / 2 over one second
        let cycles = zero_crossings(&y) as f64 / 2.0;
        assert!((cycles - 200.0).abs() <= 2.0, "{cycles}");
        let est = instantaneous_frequency(&y, 8000).unwrap();
        // time-weighted mean: each estimate covers 1/f seconds
        let mean = est.len() as f64 / est.iter().map(|f| 1.0 / f).sum::<f64>();
        assert!((mean - 200.0).abs() <= 2.0, "{mean}");
    }

    #[test]
    fn phase_steps_bounded() {
        let f: Vec<f64> = (0..1000).map(|i| 50.0 + (i % 300) as f64).collect();
        let y = nco_synthesize(&f, &vec![1.0; 1000], 8000).unwrap();
        let max_step = TAU * 349.0 / 8000.0;
        for w in y.windows(2) {
            // |sin a - sin b| <= |a - b|
            assert!((w[1] - w[0]).abs() <= max_step + 1e-12);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            nco_synthesize(&[100.0; 3], &[1.0; 2], 8000),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(nco_synthesize(&[4000.0], &[1.0], 8000).is_err());
        assert!(nco_synthesize(&[100.0], &[-1.0], 8000).is_err());
    }
}
