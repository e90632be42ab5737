use super::{normalize_vibration, output_len, prepare, ConverterConfig, NormalizationStrategy, RawVibration};
use crate::algorithm::Algorithm;
use crate::audio_io::{AudioClip, VibrationSignal};
use crate::dsp::{interpolate_track, nco_synthesize};
use crate::error::{Error, Result};
use crate::psychoacoustics::analyze_frame;

/// Perceptual features of one PLM frame and the carrier amplitudes they map to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlmFrame {
    /// Frame centre in seconds.
    pub time: f64,
    pub la: f64,
    pub ra: f64,
    pub iv: f64,
    pub rv: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Loudness, roughness and carrier amplitudes for consecutive
/// non-overlapping frames of `clip`, taken as given (no peak normalization).
/// A trailing partial frame is zero-padded.
pub fn plm_frame_features(clip: &AudioClip, cfg: &ConverterConfig) -> Result<Vec<PlmFrame>> {
    let p = &cfg.plm;
    let n = p.frame_size;
    if clip.len() < n {
        return Err(Error::TooShort {
            needed: n,
            got: clip.len(),
        });
    }
    let fs = clip.sample_rate as f64;
    let mut buf = vec![0.0; n];
    clip.samples
        .chunks(n)
        .enumerate()
        .map(|(i, chunk)| {
            buf[..chunk.len()].copy_from_slice(chunk);
            buf[chunk.len()..].fill(0.0);
            let f = analyze_frame(&buf, clip.sample_rate, &cfg.psycho)?;
            let iv = (p.iv_map[0] + p.iv_map[1] * f.la.ln_1p()).max(0.0);
            let rv = if f.ra > 0.0 {
                (p.rv_map[0] + p.rv_map[1] * f.ra.powf(p.rv_map[2])).clamp(0.0, 1.0)
            } else {
                p.rv_map[0].clamp(0.0, 1.0)
            };
            Ok(PlmFrame {
                time: (i * n) as f64 / fs + n as f64 / (2.0 * fs),
                la: f.la,
                ra: f.ra,
                iv,
                rv,
                a1: iv * (1.0 - p.mix * rv),
                a2: iv * p.mix * rv,
            })
        })
        .collect()
}

/// Perception-level mapping: two fixed carriers whose amplitudes follow
/// frame loudness (intensity) and roughness (share of the upper carrier).
pub fn convert_plm(clip: &AudioClip, cfg: &ConverterConfig) -> Result<VibrationSignal> {
    let clip = prepare(clip)?;
    let frames = plm_frame_features(&clip, cfg)?;
    let rate = cfg.output_rate;
    let len = output_len(clip.len(), clip.sample_rate, cfg);

    let times: Vec<f64> = frames.iter().map(|f| f.time).collect();
    let a1: Vec<f64> = frames.iter().map(|f| f.a1).collect();
    let a2: Vec<f64> = frames.iter().map(|f| f.a2).collect();
    let env1 = interpolate_track(&times, &a1, len, rate);
    let env2 = interpolate_track(&times, &a2, len, rate);

    let c1 = nco_synthesize(&vec![cfg.plm.f1; len], &env1, rate)?;
    let c2 = nco_synthesize(&vec![cfg.plm.f2; len], &env2, rate)?;
    let raw = RawVibration {
        samples: c1.iter().zip(&c2).map(|(a, b)| a + b).collect(),
        sample_rate: rate,
        algorithm: Algorithm::Plm,
    };
    let segment_len = output_len(cfg.plm.frame_size, clip.sample_rate, cfg).max(1);
    normalize_vibration(&raw, NormalizationStrategy::SegmentMax { segment_len }, cfg)
}
