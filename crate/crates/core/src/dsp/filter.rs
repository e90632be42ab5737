//! Butterworth high-pass and band-pass filters as cascaded biquads.
//!
//! Poles of the analog low-pass prototype are mapped to the target response
//! (high-pass or band-pass), then to the z-plane with the bilinear transform.
//! Band edges are prewarped so the digital response hits the requested
//! frequencies. For band-pass, `q` is centre / bandwidth of the composite
//! response and `order` counts poles, so order 4 is two biquads.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Highpass,
    Bandpass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub kind: FilterKind,
    /// Cutoff for high-pass, centre for band-pass, in Hz.
    pub center_or_cutoff: f64,
    pub q: f64,
    pub order: u32,
}

impl FilterSpec {
    pub fn highpass(cutoff: f64, order: u32) -> Self {
        Self {
            kind: FilterKind::Highpass,
            center_or_cutoff: cutoff,
            q: std::f64::consts::FRAC_1_SQRT_2,
            order,
        }
    }

    pub fn bandpass(center: f64, q: f64, order: u32) -> Self {
        Self {
            kind: FilterKind::Bandpass,
            center_or_cutoff: center,
            q,
            order,
        }
    }

    /// Lower and upper -3 dB edges of a band-pass with this centre and Q.
    pub fn band_edges(&self) -> (f64, f64) {
        let f0 = self.center_or_cutoff;
        let half = 1.0 / (2.0 * self.q);
        let root = (1.0 + half * half).sqrt();
        (f0 * (root - half), f0 * (root + half))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

/// A cascade of second-order sections in transposed direct form II.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadCascade {
    sections: Vec<Biquad>,
}

impl BiquadCascade {
    pub fn design(spec: &FilterSpec, sample_rate: u32) -> Result<Self> {
        let fs = sample_rate as f64;
        let nyquist = fs / 2.0;
        if !(spec.order == 2 || spec.order == 4) {
            return Err(Error::invalid(format!(
                "filter order must be 2 or 4, got {}",
                spec.order
            )));
        }
        if !(spec.q > 0.0) {
            return Err(Error::invalid("filter Q must be positive"));
        }
        let fc = spec.center_or_cutoff;
        if !(fc > 0.0) || fc >= nyquist {
            return Err(Error::invalid(format!("cutoff {fc} Hz must lie in (0, {nyquist}) Hz")));
        }

        let fs2 = 2.0 * fs;
        let warp = |f: f64| fs2 * (std::f64::consts::PI * f / fs).tan();

        let (proto_order, numerator) = match spec.kind {
            FilterKind::Highpass => (spec.order as usize, [1.0, -2.0, 1.0]),
            FilterKind::Bandpass => (spec.order as usize / 2, [1.0, 0.0, -1.0]),
        };
        let proto: Vec<Complex<f64>> = (0..proto_order)
            .map(|k| {
                let theta = std::f64::consts::PI * (2 * k + proto_order + 1) as f64 / (2 * proto_order) as f64;
                Complex::from_polar(1.0, theta)
            })
            .collect();

        let analog: Vec<Complex<f64>> = match spec.kind {
            FilterKind::Highpass => {
                let wc = warp(fc);
                proto.iter().map(|&p| wc / p).collect()
            }
            FilterKind::Bandpass => {
                let (f1, f2) = spec.band_edges();
                if f2 >= nyquist {
                    return Err(Error::invalid(format!(
                        "upper band edge {f2:.1} Hz reaches Nyquist {nyquist} Hz"
                    )));
                }
                let (w1, w2) = (warp(f1), warp(f2));
                let w0sq = w1 * w2;
                let bw = w2 - w1;
                proto
                    .iter()
                    .flat_map(|&p| {
                        let pb = p * bw;
                        let disc = (pb * pb - 4.0 * w0sq).sqrt();
                        [(pb + disc) / 2.0, (pb - disc) / 2.0]
                    })
                    .collect()
            }
        };

        let digital: Vec<Complex<f64>> = analog.iter().map(|&s| (fs2 + s) / (fs2 - s)).collect();
        let mut sections: Vec<Biquad> = pair_poles(&digital)
            .into_iter()
            .map(|a| Biquad { b: numerator, a })
            .collect();

        // unity gain at the passband reference frequency
        let reference_hz = match spec.kind {
            FilterKind::Highpass => nyquist,
            FilterKind::Bandpass => {
                let (f1, f2) = spec.band_edges();
                let w0 = (warp(f1) * warp(f2)).sqrt();
                (w0 / fs2).atan() * fs / std::f64::consts::PI
            }
        };
        let cascade = BiquadCascade {
            sections: sections.clone(),
        };
        let g = cascade.response(reference_hz, sample_rate).norm();
        for c in sections[0].b.iter_mut() {
            *c /= g;
        }
        Ok(BiquadCascade { sections })
    }

    pub fn n_sections(&self) -> usize {
        self.sections.len()
    }

    /// Complex frequency response at `freq` Hz.
    pub fn response(&self, freq: f64, sample_rate: u32) -> Complex<f64> {
        let w = 2.0 * std::f64::consts::PI * freq / sample_rate as f64;
        let z1 = Complex::from_polar(1.0, -w);
        let z2 = z1 * z1;
        self.sections.iter().fold(Complex::new(1.0, 0.0), |acc, s| {
            let num = s.b[0] + s.b[1] * z1 + s.b[2] * z2;
            let den = 1.0 + s.a[0] * z1 + s.a[1] * z2;
            acc * num / den
        })
    }

    /// Causal filtering from zero initial state.
    pub fn process(&self, input: &[f64]) -> Vec<f64> {
        let mut out = input.to_vec();
        for s in &self.sections {
            let (mut z1, mut z2) = (0.0, 0.0);
            for v in out.iter_mut() {
                let x = *v;
                let y = s.b[0] * x + z1;
                z1 = s.b[1] * x - s.a[0] * y + z2;
                z2 = s.b[2] * x - s.a[1] * y;
                *v = y;
            }
        }
        out
    }
}

/// Group z-plane poles into real second-order denominators `[a1, a2]`.
fn pair_poles(poles: &[Complex<f64>]) -> Vec<[f64; 2]> {
    const IMAG_EPS: f64 = 1e-12;
    let mut upper: Vec<Complex<f64>> = poles.iter().copied().filter(|p| p.im > IMAG_EPS).collect();
    upper.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut real: Vec<f64> = poles.iter().filter(|p| p.im.abs() <= IMAG_EPS).map(|p| p.re).collect();
    real.sort_by(f64::total_cmp);

    let mut out: Vec<[f64; 2]> = upper.iter().map(|p| [-2.0 * p.re, p.norm_sqr()]).collect();
    for pair in real.chunks(2) {
        match pair {
            [p1, p2] => out.push([-(p1 + p2), p1 * p2]),
            [p] => out.push([-p, 0.0]),
            _ => unreachable!(),
        }
    }
    out
}

/// Filter `signal` sampled at `sample_rate` with the Butterworth design in
/// `spec`. Output length equals input length.
pub fn butterworth_filter(signal: &[f64], sample_rate: u32, spec: &FilterSpec) -> Result<Vec<f64>> {
    Ok(BiquadCascade::design(spec, sample_rate)?.process(signal))
}
