//! Frame-level perceptual features: contour-weighted loudness, Bark-band
//! specific loudness and pairwise spectral-peak roughness.
//!
//! Loudness is a Zwicker-style approximation rather than a certified
//! ISO 532-1 implementation. Each spectral bin is weighted by an
//! equal-loudness contour, power is pooled into 24 Bark bands, and every band
//! is compressed with a Stevens power law. A 40 dB, 1 kHz tone is about one
//! sone, and a full-scale sine is taken to be `reference_db` dB SPL.

use serde::{Deserialize, Serialize};

use crate::dsp::{hann, power_spectrum, windowed_spectrum};
use crate::error::{Error, Result};

pub const BARK_BANDS: usize = 24;
pub const MIN_LOUDNESS_FRAME: usize = 256;
pub const MIN_ROUGHNESS_FRAME: usize = 1024;

/// ISO 226 parameter table: frequency, alpha_f, L_U, T_f.
const ISO226: [(f64, f64, f64, f64); 29] = [
    (20.0, 0.635, -31.5, 78.1),
    (25.0, 0.602, -27.2, 68.7),
    (31.5, 0.569, -23.1, 59.5),
    (40.0, 0.537, -19.3, 51.1),
    (50.0, 0.509, -16.1, 44.0),
    (63.0, 0.482, -13.1, 37.5),
    (80.0, 0.456, -10.4, 31.5),
    (100.0, 0.433, -8.2, 26.5),
    (125.0, 0.412, -6.3, 22.1),
    (160.0, 0.391, -4.6, 17.9),
    (200.0, 0.373, -3.2, 14.4),
    (250.0, 0.357, -2.1, 11.4),
    (315.0, 0.343, -1.2, 8.6),
    (400.0, 0.330, -0.5, 6.2),
    (500.0, 0.320, 0.0, 4.4),
    (630.0, 0.311, 0.4, 3.0),
    (800.0, 0.303, 0.5, 2.2),
    (1000.0, 0.300, 0.0, 2.4),
    (1250.0, 0.295, -2.7, 3.5),
    (1600.0, 0.292, -4.2, 1.7),
    (2000.0, 0.290, -1.2, -1.3),
    (2500.0, 0.290, 1.4, -4.2),
    (3150.0, 0.289, 2.3, -6.0),
    (4000.0, 0.289, 1.0, -5.4),
    (5000.0, 0.289, -2.3, -1.5),
    (6300.0, 0.293, -7.2, 6.0),
    (8000.0, 0.303, -11.2, 12.6),
    (10000.0, 0.323, -10.9, 13.9),
    (12500.0, 0.354, -3.5, 12.3),
];

fn iso226_spl(af: f64, lu: f64, tf: f64, phon: f64) -> f64 {
    let a = 4.47e-3 * (10f64.powf(0.025 * phon) - 1.15) + (0.4 * 10f64.powf((tf + lu) / 10.0 - 9.0)).powf(af);
    10.0 / af * a.log10() - lu + 94.0
}

/// Gain in dB that maps each frequency onto the 1 kHz point of the
/// `phon` equal-loudness contour.
pub fn equal_loudness_weights(phon: f64) -> Vec<[f64; 2]> {
    let at_1k = iso226_spl(0.300, 0.0, 2.4, phon);
    ISO226
        .iter()
        .map(|&(f, af, lu, tf)| [f, at_1k - iso226_spl(af, lu, tf, phon)])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoughnessParams {
    pub amplitude_exponent: f64,
    pub fluctuation_exponent: f64,
    pub b1: f64,
    pub b2: f64,
    pub s1: f64,
    pub s2: f64,
    pub max_peaks: usize,
    /// Peaks below this level relative to the frame maximum are ignored.
    pub peak_floor_db: f64,
}

impl Default for RoughnessParams {
    fn default() -> Self {
        Self {
            amplitude_exponent: 0.1,
            fluctuation_exponent: 3.11,
            b1: 3.5,
            b2: 5.75,
            s1: 0.0207,
            s2: 18.96,
            max_peaks: 10,
            peak_floor_db: -40.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsychoConfig {
    /// Level in dB SPL assigned to a full-scale sine.
    pub reference_db: f64,
    pub stevens_exponent: f64,
    /// `[hz, gain_db]` points, interpolated linearly in log frequency.
    pub contour: Vec<[f64; 2]>,
    pub roughness: RoughnessParams,
}

impl Default for PsychoConfig {
    fn default() -> Self {
        Self {
            reference_db: 100.0,
            stevens_exponent: 0.23,
            contour: equal_loudness_weights(40.0),
            roughness: RoughnessParams::default(),
        }
    }
}

impl PsychoConfig {
    fn contour_gain_db(&self, hz: f64) -> f64 {
        let c = &self.contour;
        match c.len() {
            0 => 0.0,
            _ if hz <= c[0][0] => c[0][1],
            n if hz >= c[n - 1][0] => c[n - 1][1],
            _ => {
                let i = c.partition_point(|p| p[0] <= hz) - 1;
                let (f0, g0) = (c[i][0], c[i][1]);
                let (f1, g1) = (c[i + 1][0], c[i + 1][1]);
                let a = (hz.ln() - f0.ln()) / (f1.ln() - f0.ln());
                g0 + a * (g1 - g0)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.stevens_exponent > 0.0) {
            return Err(Error::Config("stevens_exponent must be positive".into()));
        }
        if self.contour.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::Config("contour frequencies must be ascending".into()));
        }
        if self.contour.iter().any(|p| !(p[0] > 0.0)) {
            return Err(Error::Config("contour frequencies must be positive".into()));
        }
        Ok(())
    }
}

/// Critical-band rate in Bark (Zwicker & Terhardt).
pub fn hz_to_bark(hz: f64) -> f64 {
    13.0 * (0.00076 * hz).atan() + 3.5 * (hz / 7500.0).powi(2).atan()
}

/// Bark band (0-based) holding `hz`. Everything above 23 Bark goes to the
/// top band, so the bands partition 0..Nyquist.
pub fn bark_band(hz: f64) -> usize {
    (hz_to_bark(hz).floor().max(0.0) as usize).min(BARK_BANDS - 1)
}

/// Unweighted power per Bark band.
pub fn bark_band_energies(frame: &[f64], sample_rate: u32) -> Result<[f64; BARK_BANDS]> {
    check_len(frame, MIN_LOUDNESS_FRAME)?;
    let (power, n_fft) = power_spectrum(frame);
    let mut bands = [0.0; BARK_BANDS];
    for (k, p) in power.iter().enumerate() {
        bands[bark_band(k as f64 * sample_rate as f64 / n_fft as f64)] += p;
    }
    Ok(bands)
}

fn check_len(frame: &[f64], needed: usize) -> Result<()> {
    if frame.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: frame.len(),
        });
    }
    Ok(())
}

/// Specific loudness (sones) of each of the 24 Bark bands.
pub fn specific_loudness_bark(frame: &[f64], sample_rate: u32, cfg: &PsychoConfig) -> Result<[f64; BARK_BANDS]> {
    check_len(frame, MIN_LOUDNESS_FRAME)?;
    let (power, n_fft) = power_spectrum(frame);
    let mut weighted = [0.0; BARK_BANDS];
    for (k, p) in power.iter().enumerate() {
        let hz = k as f64 * sample_rate as f64 / n_fft as f64;
        let gain = 10f64.powf(cfg.contour_gain_db(hz.max(1.0)) / 10.0);
        weighted[bark_band(hz)] += p * gain;
    }
    // band level in dB SPL, then 40 dB maps to one sone
    let full_scale_power = 0.5;
    let unit = full_scale_power * 10f64.powf((40.0 - cfg.reference_db) / 10.0);
    Ok(weighted.map(|p| {
        if p > 0.0 {
            (p / unit).powf(cfg.stevens_exponent)
        } else {
            0.0
        }
    }))
}

/// Total loudness in sones.
pub fn frame_loudness(frame: &[f64], sample_rate: u32, cfg: &PsychoConfig) -> Result<f64> {
    Ok(specific_loudness_bark(frame, sample_rate, cfg)?.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPeak {
    pub hz: f64,
    pub amplitude: f64,
}

/// Hann sidelobes sit about 31.5 dB below the main lobe and within a few
/// bins of it. Weaker maxima that close to a much stronger peak are treated
/// as leakage, not partials.
const SIDELOBE_BINS: f64 = 4.0;
const SIDELOBE_RATIO: f64 = 0.0316; // -30 dB

/// Hann main-lobe magnitude `delta` bins off centre, relative to the peak.
fn hann_lobe(delta: f64) -> f64 {
    if delta == 0.0 {
        return 1.0;
    }
    let x = std::f64::consts::PI * delta;
    x.sin() / x / (1.0 - delta * delta)
}

/// Up to `max_peaks` largest local maxima of the Hann-windowed magnitude
/// spectrum within `peak_floor_db` of the strongest, with frequency and
/// height interpolated from the two largest bins (exact for power-of-two
/// frames). Sidelobes of stronger peaks are skipped.
pub fn spectral_peaks(frame: &[f64], sample_rate: u32, params: &RoughnessParams) -> Vec<SpectralPeak> {
    let n_fft = frame.len().next_power_of_two();
    let window = hann(frame.len());
    let wsum: f64 = window.iter().sum();
    let mag: Vec<f64> = windowed_spectrum(frame, &window, n_fft)
        .iter()
        .map(|c| 2.0 * c.norm() / wsum)
        .collect();
    let max = mag.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let floor = max * 10f64.powf(params.peak_floor_db / 20.0);
    let bin_hz = sample_rate as f64 / n_fft as f64;

    let mut peaks: Vec<SpectralPeak> = (1..mag.len() - 1)
        .filter(|&k| mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] >= floor)
        .map(|k| {
            // exact for a lone sinusoid under a Hann window
            let (side, sign) = if mag[k + 1] >= mag[k - 1] {
                (mag[k + 1], 1.0)
            } else {
                (mag[k - 1], -1.0)
            };
            let alpha = side / mag[k];
            let delta = ((2.0 * alpha - 1.0) / (alpha + 1.0)).clamp(0.0, 0.5);
            SpectralPeak {
                hz: (k as f64 + sign * delta) * bin_hz,
                amplitude: mag[k] / hann_lobe(delta),
            }
        })
        .collect();
    peaks.sort_by(|x, y| y.amplitude.total_cmp(&x.amplitude).then(x.hz.total_cmp(&y.hz)));
    let mut kept: Vec<SpectralPeak> = Vec::with_capacity(params.max_peaks);
    for p in peaks {
        if kept.len() == params.max_peaks {
            break;
        }
        let leakage = kept
            .iter()
            .any(|k| (k.hz - p.hz).abs() <= SIDELOBE_BINS * bin_hz && p.amplitude < SIDELOBE_RATIO * k.amplitude);
        if !leakage {
            kept.push(p);
        }
    }
    kept
}

/// Roughness contribution of one pair of partials: amplitude term times
/// amplitude-fluctuation term times frequency-separation term.
pub fn pair_roughness(a: SpectralPeak, b: SpectralPeak, p: &RoughnessParams) -> f64 {
    let (f_lo, f_hi) = if a.hz <= b.hz { (a.hz, b.hz) } else { (b.hz, a.hz) };
    let a_min = a.amplitude.min(b.amplitude);
    let sum = a.amplitude + b.amplitude;
    if !(sum > 0.0) {
        return 0.0;
    }
    let x = (a.amplitude * b.amplitude).powf(p.amplitude_exponent);
    let y = 0.5 * (2.0 * a_min / sum).powf(p.fluctuation_exponent);
    let s = 0.24 / (p.s1 * f_lo + p.s2);
    let df = f_hi - f_lo;
    let z = (-p.b1 * s * df).exp() - (-p.b2 * s * df).exp();
    x * y * z
}

/// Sum of pairwise roughness over the frame's spectral peaks.
pub fn frame_roughness(frame: &[f64], sample_rate: u32, cfg: &PsychoConfig) -> Result<f64> {
    check_len(frame, MIN_ROUGHNESS_FRAME)?;
    let peaks = spectral_peaks(frame, sample_rate, &cfg.roughness);
    let mut total = 0.0;
    for i in 0..peaks.len() {
        for j in i + 1..peaks.len() {
            total += pair_roughness(peaks[i], peaks[j], &cfg.roughness);
        }
    }
    Ok(total)
}

/// Loudness, roughness and Bark specific loudness of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PsychoFrame {
    pub la: f64,
    pub ra: f64,
    pub specific_loudness: [f64; BARK_BANDS],
}

pub fn analyze_frame(frame: &[f64], sample_rate: u32, cfg: &PsychoConfig) -> Result<PsychoFrame> {
    let specific_loudness = specific_loudness_bark(frame, sample_rate, cfg)?;
    Ok(PsychoFrame {
        la: specific_loudness.iter().sum(),
        ra: frame_roughness(frame, sample_rate, cfg)?,
        specific_loudness,
    })
}
