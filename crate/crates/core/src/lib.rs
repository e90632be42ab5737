//! Deterministic audio-to-vibrotactile conversion toolkit.
//!
//! Four signal-processing converters turn environmental sound clips into
//! 8 kHz vibration waveforms. Around them sit the pieces needed to build and
//! study a rated audio-vibration dataset: acoustic feature extraction and
//! clustered sampling, rating aggregation, preference-weighted blending,
//! reconstruction metrics and a latency benchmark.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithm;
pub mod analysis;
pub mod audio_io;
pub mod bench;
pub mod converters;
pub mod curation;
pub mod dsp;
pub mod error;
pub mod psychoacoustics;

pub use algorithm::Algorithm;
pub use audio_io::{AudioClip, VibrationSignal, Waveform, VIBRATION_RATE};
pub use error::{Error, Result};
