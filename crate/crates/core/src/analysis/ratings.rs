use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::algorithm::Algorithm;
use crate::curation::csv_error;
use crate::error::{Error, Result};

pub const RATING_MIN: f64 = 0.0;
pub const RATING_MAX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatingRecord {
    pub clip_id: String,
    pub algorithm: Algorithm,
    pub rater_id: String,
    pub rating: f64,
}

/// Source column names for each canonical ratings field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub clip_id: String,
    pub algorithm: String,
    pub rater_id: String,
    pub rating: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            clip_id: "clip_id".into(),
            algorithm: "algorithm".into(),
            rater_id: "rater_id".into(),
            rating: "rating".into(),
        }
    }
}

impl FromStr for ColumnMap {
    type Err = Error;

    /// `canonical=source` pairs separated by commas, e.g.
    /// `clip_id=filename,algorithm=method`. Unlisted fields keep their
    /// canonical names.
    fn from_str(s: &str) -> Result<Self> {
        let mut map = ColumnMap::default();
        for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, source) = pair
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("column map entry '{pair}' is not key=column")))?;
            let slot = match key.trim() {
                "clip_id" => &mut map.clip_id,
                "algorithm" => &mut map.algorithm,
                "rater_id" => &mut map.rater_id,
                "rating" => &mut map.rating,
                other => return Err(Error::Validation(format!("unknown ratings field '{other}'"))),
            };
            *slot = source.trim().to_string();
        }
        Ok(map)
    }
}

/// Validated per-rater ratings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatingsTable {
    pub records: Vec<RatingRecord>,
}

impl RatingsTable {
    pub fn new(records: Vec<RatingRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Validation("ratings table is empty".into()));
        }
        for (i, r) in records.iter().enumerate() {
            check_rating(r.rating).map_err(|m| Error::Validation(format!("record {}: {m}", i + 1)))?;
            if r.algorithm.converter_index().is_none() {
                return Err(Error::Validation(format!(
                    "record {}: {} is not a rated converter",
                    i + 1,
                    r.algorithm
                )));
            }
        }
        Ok(Self { records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Mean rating over raters for every clip, indexed like
    /// [`Algorithm::CONVERTERS`]. Rater values are summed in sorted order so
    /// the result does not depend on record order.
    pub fn clip_means(&self) -> BTreeMap<String, [Option<f64>; 4]> {
        let mut pooled: BTreeMap<&str, [Vec<f64>; 4]> = BTreeMap::new();
        for r in &self.records {
            let idx = r.algorithm.converter_index().expect("validated");
            pooled.entry(&r.clip_id).or_default()[idx].push(r.rating);
        }
        pooled
            .into_iter()
            .map(|(clip, mut per_algo)| {
                let means = std::array::from_fn(|a| {
                    let v = &mut per_algo[a];
                    (!v.is_empty()).then(|| {
                        v.sort_by(f64::total_cmp);
                        v.iter().sum::<f64>() / v.len() as f64
                    })
                });
                (clip.to_string(), means)
            })
            .collect()
    }
}

fn check_rating(v: f64) -> std::result::Result<(), String> {
    if v.is_finite() && (RATING_MIN..=RATING_MAX).contains(&v) {
        Ok(())
    } else {
        Err(format!("rating {v} outside [{RATING_MIN}, {RATING_MAX}]"))
    }
}

/// Load a ratings CSV with the canonical header
/// `clip_id,algorithm,rater_id,rating`.
pub fn load_ratings(path: &Path) -> Result<RatingsTable> {
    load_ratings_with_map(path, &ColumnMap::default())
}

/// Load a ratings CSV whose columns are named as in `map`. Extra columns are
/// ignored. Algorithm values may be short tags or long names.
pub fn load_ratings_with_map(path: &Path, map: &ColumnMap) -> Result<RatingsTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, 0, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Schema {
                path: path.to_path_buf(),
                row: 0,
                message: format!("missing column '{name}'"),
            })
    };
    let (c_clip, c_algo, c_rater, c_rating) = (
        column(&map.clip_id)?,
        column(&map.algorithm)?,
        column(&map.rater_id)?,
        column(&map.rating)?,
    );

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| csv_error(path, row_no, e))?;
        let schema = |message: String| Error::Schema {
            path: path.to_path_buf(),
            row: row_no,
            message,
        };
        let field = |c: usize| row.get(c).map(str::trim).unwrap_or("");
        let clip_id = field(c_clip);
        if clip_id.is_empty() {
            return Err(schema("empty clip_id".into()));
        }
        let algorithm: Algorithm = field(c_algo).parse().map_err(|e: Error| schema(e.to_string()))?;
        if algorithm.converter_index().is_none() {
            return Err(schema(format!("{algorithm} is not a rated converter")));
        }
        let rating: f64 = field(c_rating)
            .parse()
            .map_err(|_| schema(format!("rating '{}' is not a number", field(c_rating))))?;
        check_rating(rating).map_err(schema)?;
        records.push(RatingRecord {
            clip_id: clip_id.to_string(),
            algorithm,
            rater_id: field(c_rater).to_string(),
            rating,
        });
    }
    if records.is_empty() {
        return Err(Error::Validation(format!("{}: ratings table is empty", path.display())));
    }
    Ok(RatingsTable { records })
}
