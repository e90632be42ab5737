use super::{hann, windowed_spectrum};
use crate::error::{Error, Result};

/// Hann-windowed magnitude STFT, stored frame-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    magnitudes: Vec<f64>,
    n_frames: usize,
    pub fft_size: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_bins(&self) -> usize {
        self.fft_size / 2 + 1
    }

    pub fn frame(&self, i: usize) -> &[f64] {
        let nb = self.n_bins();
        &self.magnitudes[i * nb..(i + 1) * nb]
    }

    pub fn frames(&self) -> impl Iterator<Item = &[f64]> {
        self.magnitudes.chunks_exact(self.n_bins())
    }

    /// All magnitudes, frame after frame.
    pub fn as_slice(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn bin_hz(&self, bin: usize) -> f64 {
        bin as f64 * self.sample_rate as f64 / self.fft_size as f64
    }
}

/// Short-time Fourier transform magnitudes. No padding: frames start at
/// multiples of `hop` and must fit entirely inside the signal.
pub fn stft(signal: &[f64], sample_rate: u32, fft_size: usize, hop: usize) -> Result<Spectrogram> {
    if !fft_size.is_power_of_two() || fft_size < 2 {
        return Err(Error::invalid(format!("FFT size {fft_size} is not a power of two")));
    }
    if hop == 0 || hop > fft_size {
        return Err(Error::invalid(format!("hop {hop} must be in 1..={fft_size}")));
    }
    if signal.len() < fft_size {
        return Err(Error::TooShort {
            needed: fft_size,
            got: signal.len(),
        });
    }
    let n_frames = (signal.len() - fft_size) / hop + 1;
    let window = hann(fft_size);
    let mut magnitudes = Vec::with_capacity(n_frames * (fft_size / 2 + 1));
    for f in 0..n_frames {
        let start = f * hop;
        let spec = windowed_spectrum(&signal[start..start + fft_size], &window, fft_size);
        magnitudes.extend(spec.iter().map(|c| c.norm()));
    }
    Ok(Spectrogram {
        magnitudes,
        n_frames,
        fft_size,
        hop,
        sample_rate,
    })
}
