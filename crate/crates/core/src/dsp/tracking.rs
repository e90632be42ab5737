use crate::error::{Error, Result};

fn ms_to_samples(ms: f64, sample_rate: u32) -> usize {
    ((ms * sample_rate as f64 / 1000.0).round() as usize).max(1)
}

/// Short-term RMS over windows of `window_ms`, advancing by `hop_ms`.
/// Only windows that fit entirely in the signal are produced.
pub fn frame_rms(signal: &[f64], sample_rate: u32, window_ms: f64, hop_ms: f64) -> Result<Vec<f64>> {
    if !(window_ms > 0.0 && hop_ms > 0.0) {
        return Err(Error::invalid("window and hop must be positive"));
    }
    let win = ms_to_samples(window_ms, sample_rate);
    let hop = ms_to_samples(hop_ms, sample_rate);
    if win > signal.len() {
        return Err(Error::TooShort {
            needed: win,
            got: signal.len(),
        });
    }
    let count = (signal.len() - win) / hop + 1;
    Ok((0..count)
        .map(|i| {
            let w = &signal[i * hop..i * hop + win];
            (w.iter().map(|x| x * x).sum::<f64>() / win as f64).sqrt()
        })
        .collect())
}

/// Frequency estimates from successive upward zero crossings, one per
/// crossing interval. Crossing times are refined by linear interpolation.
///
/// A run of two or more exact zeros is treated as a gap in the signal: no
/// interval is measured across it.
pub fn instantaneous_frequency(signal: &[f64], sample_rate: u32) -> Result<Vec<f64>> {
    let fs = sample_rate as f64;
    let mut estimates = Vec::new();
    let mut last_crossing: Option<f64> = None;
    // index and value of the most recent nonzero sample
    let mut prev: Option<(usize, f64)> = None;

    for (n, &x) in signal.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        if let Some((pn, pv)) = prev {
            if n - pn > 2 {
                last_crossing = None;
            } else if pv < 0.0 && x > 0.0 {
                let t = pn as f64 + (n - pn) as f64 * (-pv) / (x - pv);
                if let Some(lc) = last_crossing {
                    estimates.push(fs / (t - lc));
                }
                last_crossing = Some(t);
            }
        }
        prev = Some((n, x));
    }

    if estimates.is_empty() {
        return Err(Error::invalid("fewer than two zero crossings"));
    }
    Ok(estimates)
}

/// Linearly interpolate a track sampled at `times` (seconds, ascending) onto
/// `n` output samples at `sample_rate`. Values beyond the ends are held.
pub fn interpolate_track(times: &[f64], values: &[f64], n: usize, sample_rate: u32) -> Vec<f64> {
    assert_eq!(times.len(), values.len());
    if values.is_empty() {
        return vec![0.0; n];
    }
    let fs = sample_rate as f64;
    let mut j = 0;
    (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            while j + 1 < times.len() && times[j + 1] <= t {
                j += 1;
            }
            if t <= times[0] {
                values[0]
            } else if j + 1 >= times.len() {
                values[times.len() - 1]
            } else {
                let span = times[j + 1] - times[j];
                let a = (t - times[j]) / span;
                values[j] + a * (values[j + 1] - values[j])
            }
        })
        .collect()
}
