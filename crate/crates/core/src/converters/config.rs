use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio_io::VIBRATION_RATE;
use crate::error::{Error, Result};
use crate::psychoacoustics::{PsychoConfig, BARK_BANDS, MIN_ROUGHNESS_FRAME};

/// Perception-level mapping parameters.
///
/// `iv_map = [a0, a1]` gives `Iv = a0 + a1 ln(1 + La)`;
/// `rv_map = [b0, b1, b2]` gives `Rv = b0 + b1 Ra^b2`, clamped to [0, 1].
/// Carrier amplitudes are `Iv (1 - k Rv)` at `f1` and `Iv k Rv` at `f2`,
/// with `k = mix`. The defaults are placeholders chosen for plausible ranges,
/// not published coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlmConfig {
    pub frame_size: usize,
    pub f1: f64,
    pub f2: f64,
    pub iv_map: [f64; 2],
    pub rv_map: [f64; 3],
    pub mix: f64,
}

impl Default for PlmConfig {
    fn default() -> Self {
        Self {
            frame_size: 4096,
            f1: 175.0,
            f2: 210.0,
            iv_map: [0.0, 1.0],
            rv_map: [0.0, 0.5, 0.5],
            mix: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FshiftConfig {
    pub shifts: Vec<f64>,
    pub hp_cutoff: f64,
    pub hp_order: u32,
    pub bp_center: f64,
    pub bp_q: f64,
    pub bp_order: u32,
}

impl Default for FshiftConfig {
    fn default() -> Self {
        Self {
            shifts: vec![-12.0, -24.0],
            hp_cutoff: 10.0,
            hp_order: 2,
            bp_center: 250.0,
            bp_q: 1.0,
            bp_order: 4,
        }
    }
}

/// Pitch-matching parameters. `regression_coeffs` holds one weight per Bark
/// band followed by the intercept; the predicted frequency is
/// `intercept + sum(w_b p_b)` where `p_b` is the band's share of the
/// window's total specific loudness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PitchConfig {
    pub window_ms: f64,
    pub overlap: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub regression_coeffs: Vec<f64>,
}

impl Default for PitchConfig {
    /// Weights rise linearly from `f_min` at band 0 to `f_max` at band 23, so
    /// the prediction is the loudness-weighted Bark centroid mapped onto the
    /// output range. This stands in for perceptually fitted coefficients.
    fn default() -> Self {
        let (f_min, f_max) = (50.0, 400.0);
        let top = (BARK_BANDS - 1) as f64;
        let mut regression_coeffs: Vec<f64> = (0..BARK_BANDS)
            .map(|b| f_min + (f_max - f_min) * b as f64 / top)
            .collect();
        regression_coeffs.push(0.0);
        Self {
            window_ms: 10.0,
            overlap: 0.5,
            f_min,
            f_max,
            regression_coeffs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HapticGenConfig {
    pub window_ms: f64,
    pub f_center: f64,
    pub f_dev: f64,
}

impl Default for HapticGenConfig {
    fn default() -> Self {
        Self {
            window_ms: 10.0,
            f_center: 200.0,
            f_dev: 50.0,
        }
    }
}

/// Every tunable of the four converters and the shared output normalization.
/// Loadable from TOML; missing keys keep their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConverterConfig {
    pub plm: PlmConfig,
    pub fshift: FshiftConfig,
    pub pitch: PitchConfig,
    pub hapticgen: HapticGenConfig,
    pub psycho: PsychoConfig,
    pub output_rate: u32,
    pub target_segment_rms: f64,
}

impl Default for ConverterConfig {
    fn default() -> Self {
        Self {
            plm: PlmConfig::default(),
            fshift: FshiftConfig::default(),
            pitch: PitchConfig::default(),
            hapticgen: HapticGenConfig::default(),
            psycho: PsychoConfig::default(),
            output_rate: VIBRATION_RATE,
            target_segment_rms: 0.15,
        }
    }
}

impl ConverterConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Defaults, then the TOML file at `path` if given, then `overrides`
    /// as `dotted.key=value` pairs. Values are parsed as TOML and fall back
    /// to plain strings.
    pub fn layered(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                text.parse::<toml::Table>()
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override '{item}' is not key=value")))?;
            let value = format!("v = {}", raw.trim())
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
            let mut parts: Vec<&str> = key.trim().split('.').collect();
            let leaf = parts.pop().filter(|l| !l.is_empty());
            let leaf = leaf.ok_or_else(|| Error::Config(format!("override '{item}' has an empty key")))?;
            let mut node = &mut table;
            for part in parts {
                node = node
                    .entry(part)
                    .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                    .as_table_mut()
                    .ok_or_else(|| Error::Config(format!("override '{item}': '{part}' is not a section")))?;
            }
            node.insert(leaf.to_string(), value);
        }
        let cfg: Self = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.output_rate != VIBRATION_RATE {
            return bad(format!(
                "output_rate must be {VIBRATION_RATE}, got {}",
                self.output_rate
            ));
        }
        let nyquist = self.output_rate as f64 / 2.0;
        if !(self.target_segment_rms > 0.0 && self.target_segment_rms <= 1.0) {
            return bad("target_segment_rms must lie in (0, 1]".into());
        }

        let p = &self.plm;
        if p.frame_size < MIN_ROUGHNESS_FRAME {
            return bad(format!("plm.frame_size must be at least {MIN_ROUGHNESS_FRAME}"));
        }
        for f in [p.f1, p.f2] {
            if !(f > 0.0 && f < nyquist) {
                return bad(format!("plm carrier {f} Hz outside (0, {nyquist})"));
            }
        }
        if !(0.0..=1.0).contains(&p.mix) {
            return bad("plm.mix must lie in [0, 1]".into());
        }

        let s = &self.fshift;
        if s.shifts.iter().any(|x| !(x.abs() <= crate::dsp::MAX_SHIFT_SEMITONES)) {
            return bad("fshift.shifts must lie within ±24 semitones".into());
        }
        if !(s.hp_cutoff > 0.0 && s.bp_center > 0.0 && s.bp_q > 0.0) {
            return bad("fshift filter frequencies and Q must be positive".into());
        }
        if s.hp_order == 0 || s.bp_order == 0 || !s.bp_order.is_multiple_of(2) {
            return bad("fshift orders must be positive (band-pass order even)".into());
        }

        let c = &self.pitch;
        if !(c.window_ms > 0.0) {
            return bad("pitch.window_ms must be positive".into());
        }
        if !(0.0..1.0).contains(&c.overlap) {
            return bad("pitch.overlap must lie in [0, 1)".into());
        }
        if !(c.f_min > 0.0 && c.f_min < c.f_max && c.f_max < nyquist) {
            return bad(format!("pitch range must satisfy 0 < f_min < f_max < {nyquist}"));
        }
        if c.regression_coeffs.len() != BARK_BANDS + 1 {
            return bad(format!(
                "pitch.regression_coeffs needs {} values, got {}",
                BARK_BANDS + 1,
                c.regression_coeffs.len()
            ));
        }

        let h = &self.hapticgen;
        if !(h.window_ms > 0.0) {
            return bad("hapticgen.window_ms must be positive".into());
        }
        if !(h.f_dev >= 0.0 && h.f_center - h.f_dev > 0.0 && h.f_center + h.f_dev < nyquist) {
            return bad(format!("hapticgen range must lie within (0, {nyquist})"));
        }
        self.psycho.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = ConverterConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.pitch.regression_coeffs.len(), 25);
        assert_eq!(cfg.pitch.regression_coeffs[0], 50.0);
        assert_eq!(cfg.pitch.regression_coeffs[23], 400.0);
    }

    #[test]
    fn toml_overrides_single_fields() {
        let cfg = ConverterConfig::from_toml_str(
            "target_segment_rms = 0.2\n[hapticgen]\nf_dev = 40.0\n[psycho.roughness]\nmax_peaks = 6\n",
        )
        .unwrap();
        assert_eq!(cfg.target_segment_rms, 0.2);
        assert_eq!(cfg.hapticgen.f_dev, 40.0);
        assert_eq!(cfg.hapticgen.f_center, 200.0);
        assert_eq!(cfg.psycho.roughness.max_peaks, 6);
    }

    #[test]
    fn layered_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "target_segment_rms = 0.2\n[hapticgen]\nf_dev = 40.0\n").unwrap();
        let cfg =
            ConverterConfig::layered(Some(&path), &["hapticgen.f_dev=30".into(), "plm.f1 = 170.5".into()]).unwrap();
        assert_eq!(cfg.target_segment_rms, 0.2);
        assert_eq!(cfg.hapticgen.f_dev, 30.0);
        assert_eq!(cfg.plm.f1, 170.5);
        assert_eq!(ConverterConfig::layered(None, &[]).unwrap(), ConverterConfig::default());
        for bad in ["hapticgen", "hapticgen.nope=1", "target_segment_rms.x=1", "=3"] {
            assert!(
                matches!(ConverterConfig::layered(None, &[bad.into()]), Err(Error::Config(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn rejects_bad_values_and_keys() {
        for text in [
            "output_rate = 44100",
            "[pitch]\nf_min = 500.0",
            "[hapticgen]\nf_center = 3990.0",
            "[plm]\nframe_size = 0",
            "[fshift]\nbp_order = 3",
            "[pitch]\nregression_coeffs = [1.0, 2.0]",
            "[pitch]\nwindoww_ms = 5.0",
        ] {
            assert!(
                matches!(ConverterConfig::from_toml_str(text), Err(Error::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ConverterConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(ConverterConfig::from_toml_str(&text).unwrap(), cfg);
    }
}
