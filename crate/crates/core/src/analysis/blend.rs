use crate::algorithm::Algorithm;
use crate::audio_io::VibrationSignal;
use crate::error::{Error, Result};

/// Rating-weighted average of reference vibrations:
/// `out[n] = sum(w_i ref_i[n])` with `w_i = rating_i / sum(ratings)`.
///
/// References with zero weight are skipped, and each output sample is
/// clamped to the range spanned by the weighted references at that sample.
/// Rounding can otherwise push a convex combination one ulp outside that
/// range; the clamp makes a one-hot rating return its reference bit-exactly.
pub fn blend_targets(refs: &[VibrationSignal], ratings: &[f64]) -> Result<VibrationSignal> {
    if refs.is_empty() {
        return Err(Error::invalid("no reference signals"));
    }
    if refs.len() != ratings.len() {
        return Err(Error::LengthMismatch {
            left: refs.len(),
            right: ratings.len(),
        });
    }
    let len = refs[0].len();
    if let Some(r) = refs.iter().find(|r| r.len() != len) {
        return Err(Error::LengthMismatch {
            left: len,
            right: r.len(),
        });
    }
    if ratings.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::invalid("ratings must be finite and non-negative"));
    }
    let total: f64 = ratings.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid("ratings are all zero"));
    }
    let active: Vec<(&[f64], f64)> = refs
        .iter()
        .zip(ratings)
        .filter(|(_, &r)| r > 0.0)
        .map(|(s, &r)| (s.samples.as_slice(), r / total))
        .collect();

    let samples = (0..len)
        .map(|n| {
            let mut acc = 0.0;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &(s, w) in &active {
                acc += w * s[n];
                lo = lo.min(s[n]);
                hi = hi.max(s[n]);
            }
            acc.clamp(lo, hi)
        })
        .collect();
    Ok(VibrationSignal::new(samples, Algorithm::Blended))
}
