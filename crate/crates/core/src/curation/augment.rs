use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::audio_io::AudioClip;
use crate::dsp::pitch_shift;
use crate::error::{Error, Result};

pub const MAX_AUGMENT_SHIFT: f64 = 2.0;
/// Noise standard deviation ceiling as a fraction of the clip peak.
pub const MAX_NOISE_FRACTION: f64 = 0.005;

/// What [`augment`] did to a clip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AugmentRecord {
    pub seed: u64,
    pub shift_semitones: Option<f64>,
    pub noise_sigma: Option<f64>,
}

/// Seeded training-time augmentation. With probability 0.5 the clip is
/// pitch-shifted by a uniform amount in [-2, 2] semitones; independently,
/// with probability 0.5, Gaussian noise with standard deviation uniform in
/// (0, 0.005 * peak] is added. The result is clamped to [-1, 1].
///
/// All random draws happen whether or not a branch is taken, so the choice
/// of one branch never changes the parameters of the other.
pub fn augment(clip: &AudioClip, seed: u64) -> Result<(AudioClip, AugmentRecord)> {
    if clip.is_empty() {
        return Err(Error::invalid("cannot augment an empty clip"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let do_shift = rng.random_bool(0.5);
    let semitones = rng.random_range(-MAX_AUGMENT_SHIFT..=MAX_AUGMENT_SHIFT);
    let do_noise = rng.random_bool(0.5);
    // 1 - u maps [0, 1) onto (0, 1]
    let sigma = (1.0 - rng.random::<f64>()) * MAX_NOISE_FRACTION * clip.peak();

    let mut record = AugmentRecord {
        seed,
        shift_semitones: None,
        noise_sigma: None,
    };
    if !do_shift && !do_noise {
        return Ok((clip.clone(), record));
    }
    let mut out = if do_shift {
        record.shift_semitones = Some(semitones);
        pitch_shift(clip, semitones)?
    } else {
        clip.clone()
    };
    if do_noise {
        record.noise_sigma = Some(sigma);
        for s in &mut out.samples {
            let z: f64 = StandardNormal.sample(&mut rng);
            *s += sigma * z;
        }
    }
    for s in &mut out.samples {
        *s = s.clamp(-1.0, 1.0);
    }
    Ok((out, record))
}
