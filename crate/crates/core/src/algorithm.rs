use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Identifies which conversion produced a vibration signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Perception-level mapping: loudness/roughness to a two-carrier vibration.
    Plm,
    /// Octave down-shifting followed by band-pass shaping.
    Fshift,
    /// Bark-band pitch matching with a single sinusoid.
    Pitch,
    /// RMS-driven frequency modulation around 200 Hz.
    HapticGen,
    /// Rating-weighted mix of the other four.
    Blended,
}

impl Algorithm {
    /// The four signal-processing converters, in canonical order.
    pub const CONVERTERS: [Algorithm; 4] = [
        Algorithm::Plm,
        Algorithm::Fshift,
        Algorithm::Pitch,
        Algorithm::HapticGen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Plm => "plm",
            Algorithm::Fshift => "fshift",
            Algorithm::Pitch => "pitch",
            Algorithm::HapticGen => "hapticgen",
            Algorithm::Blended => "blended",
        }
    }

    /// Position within [`Algorithm::CONVERTERS`]; `None` for `Blended`.
    pub fn converter_index(self) -> Option<usize> {
        Self::CONVERTERS.iter().position(|&a| a == self)
    }

    /// Parse a comma-separated list such as `plm,pitch`.
    pub fn parse_list(list: &str) -> Result<Vec<Algorithm>, Error> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts the short tags as well as the long descriptive names used in
    /// published rating exports.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match norm.as_str() {
            "plm" | "perceptionlevelmapping" | "perceptionlevel" => Ok(Algorithm::Plm),
            "fshift" | "fs" | "frequencyshifting" | "frequencyshift" => Ok(Algorithm::Fshift),
            "pitch" | "pm" | "pitchmatching" => Ok(Algorithm::Pitch),
            "hapticgen" | "hg" => Ok(Algorithm::HapticGen),
            "blended" => Ok(Algorithm::Blended),
            _ => Err(Error::Validation(format!("unknown algorithm tag '{s}'"))),
        }
    }
}
