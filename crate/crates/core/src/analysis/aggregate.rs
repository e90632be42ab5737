use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use super::ratings::RatingsTable;
use crate::algorithm::Algorithm;
use crate::curation::{DatasetManifest, ManifestEntry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Category,
    Class,
    Clip,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "category" => Ok(Level::Category),
            "class" => Ok(Level::Class),
            "clip" => Ok(Level::Clip),
            other => Err(Error::Validation(format!("unknown level '{other}'"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Category => "category",
            Level::Class => "class",
            Level::Clip => "clip",
        })
    }
}

/// Mean and sample standard deviation (n - 1) of clip-level ratings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgorithmStats {
    pub algorithm: Algorithm,
    pub n: usize,
    pub mean: f64,
    /// `None` with fewer than two clips.
    pub sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    /// Category id, class id or clip id.
    pub key: String,
    /// Class name at class and clip level.
    pub label: Option<String>,
    pub n_clips: usize,
    pub stats: Vec<AlgorithmStats>,
    /// Every algorithm sharing the highest mean; more than one is a tie.
    pub winners: Vec<Algorithm>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub level: Level,
    pub n_clips: usize,
    pub overall: Vec<AlgorithmStats>,
    pub groups: Vec<GroupStats>,
    /// Clips on which each algorithm has the highest mean; a clip with tied
    /// winners counts once for each of them.
    pub clip_winner_counts: BTreeMap<Algorithm, usize>,
    /// Clips with more than one winner.
    pub clip_ties: usize,
}

type ClipMeans = [Option<f64>; 4];
/// Clips per (numeric key, clip id) with the group label.
type Groups<'a> = BTreeMap<(u32, String), (Option<String>, Vec<&'a ClipMeans>)>;

fn stats(values: &[f64], algorithm: Algorithm) -> Option<AlgorithmStats> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (n > 1).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
    Some(AlgorithmStats { algorithm, n, mean, sd })
}

fn winners(stats: &[AlgorithmStats]) -> Vec<Algorithm> {
    let best = stats.iter().map(|s| s.mean).fold(f64::NEG_INFINITY, f64::max);
    stats.iter().filter(|s| s.mean == best).map(|s| s.algorithm).collect()
}

/// Per-algorithm statistics over the clips of each group.
fn group_stats(key: String, label: Option<String>, clips: &[&[Option<f64>; 4]]) -> GroupStats {
    let stats: Vec<AlgorithmStats> = Algorithm::CONVERTERS
        .iter()
        .enumerate()
        .filter_map(|(a, &algo)| {
            let v: Vec<f64> = clips.iter().filter_map(|c| c[a]).collect();
            stats(&v, algo)
        })
        .collect();
    GroupStats {
        key,
        label,
        n_clips: clips.len(),
        winners: winners(&stats),
        stats,
    }
}

/// Aggregate clip-level ratings (mean over raters) by category, class or
/// clip. Every rated clip must appear in `manifest`.
pub fn aggregate(table: &RatingsTable, manifest: &DatasetManifest, level: Level) -> Result<AggregateReport> {
    let by_id: BTreeMap<&str, &ManifestEntry> = manifest.entries.iter().map(|e| (e.clip_id.as_str(), e)).collect();
    let clips = table.clip_means();
    if clips.is_empty() {
        return Err(Error::Validation("ratings table is empty".into()));
    }
    let mut entries = Vec::with_capacity(clips.len());
    for (clip_id, means) in &clips {
        let entry = by_id
            .get(clip_id.as_str())
            .ok_or_else(|| Error::Validation(format!("rated clip '{clip_id}' is not in the manifest")))?;
        entries.push((clip_id.as_str(), *entry, means));
    }

    let all: Vec<&[Option<f64>; 4]> = entries.iter().map(|(_, _, m)| *m).collect();
    let overall = group_stats(String::new(), None, &all).stats;

    let mut clip_winner_counts: BTreeMap<Algorithm, usize> = Algorithm::CONVERTERS.iter().map(|&a| (a, 0)).collect();
    let mut clip_ties = 0;
    for m in &all {
        let w = group_stats(String::new(), None, &[m]).winners;
        if w.len() > 1 {
            clip_ties += 1;
        }
        for a in w {
            *clip_winner_counts.get_mut(&a).expect("converter") += 1;
        }
    }

    // numeric ids sort numerically, clip ids lexically
    let mut grouped: Groups = BTreeMap::new();
    for (clip_id, entry, means) in &entries {
        let (key, label) = match level {
            Level::Category => ((entry.category_id, String::new()), None),
            Level::Class => ((entry.class_id, String::new()), Some(entry.class_name.clone())),
            Level::Clip => ((0, clip_id.to_string()), Some(entry.class_name.clone())),
        };
        grouped.entry(key).or_insert_with(|| (label, Vec::new())).1.push(*means);
    }
    let groups = grouped
        .into_iter()
        .map(|((num, text), (label, members))| {
            let key = if level == Level::Clip { text } else { num.to_string() };
            group_stats(key, label, &members)
        })
        .collect();

    Ok(AggregateReport {
        level,
        n_clips: entries.len(),
        overall,
        groups,
        clip_winner_counts,
        clip_ties,
    })
}

fn fmt_sd(sd: Option<f64>) -> String {
    sd.map_or_else(|| "-".to_string(), |v| format!("{v:.1}"))
}

impl AggregateReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Validation(e.to_string()))
    }

    /// Aligned-column text rendering: overall statistics, clip winner tally,
    /// then one row per group.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let algos = Algorithm::CONVERTERS;
        let _ = writeln!(out, "overall ({} clips)", self.n_clips);
        let _ = writeln!(out, "{:<10} {:>6} {:>6} {:>8}", "algorithm", "mean", "sd", "wins");
        for s in &self.overall {
            let wins = self.clip_winner_counts.get(&s.algorithm).copied().unwrap_or(0);
            let _ = writeln!(
                out,
                "{:<10} {:>6.1} {:>6} {:>8}",
                s.algorithm.as_str(),
                s.mean,
                fmt_sd(s.sd),
                wins
            );
        }
        let _ = writeln!(out, "clip-level ties: {}\n", self.clip_ties);

        let _ = write!(out, "{:<14} {:<18} {:>5}", self.level.to_string(), "label", "n");
        for a in algos {
            let _ = write!(out, " {:>15}", a.as_str());
        }
        let _ = writeln!(out, "  winner");
        for g in &self.groups {
            let _ = write!(
                out,
                "{:<14} {:<18} {:>5}",
                g.key,
                g.label.as_deref().unwrap_or(""),
                g.n_clips
            );
            for a in algos {
                let cell = g
                    .stats
                    .iter()
                    .find(|s| s.algorithm == a)
                    .map_or_else(|| "-".to_string(), |s| format!("{:.1} ({})", s.mean, fmt_sd(s.sd)));
                let _ = write!(out, " {cell:>15}");
            }
            let names: Vec<&str> = g.winners.iter().map(|w| w.as_str()).collect();
            let _ = writeln!(out, "  {}", names.join("="));
        }
        out
    }
}
