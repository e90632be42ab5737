//! Dataset curation: clip-level acoustic features, per-class k-means,
//! proportional sampling across clusters, training-time augmentation and
//! the dataset manifest.

mod augment;
mod features;
mod kmeans;
mod manifest;
mod sampling;

pub use augment::{augment, AugmentRecord, MAX_AUGMENT_SHIFT, MAX_NOISE_FRACTION};
pub use features::{
    extract_features, read_features_json, write_features_json, FeatureVector, FEATURE_DIM, N_CHROMA, N_MFCC,
};
pub use kmeans::{kmeans, standardize, KMeansResult, MAX_ITERATIONS};
pub use manifest::{load_manifest, write_manifest, DatasetManifest, ManifestEntry, N_CATEGORIES, N_CLASSES};
pub use sampling::{allocate, stratified_sample};

pub(crate) use manifest::csv_error;

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

/// Select `target` clips from one class: standardize the class's features,
/// cluster them into `min(k, n)` groups and sample proportionally.
/// Returns indices into `features`, sorted.
pub fn curate_class(features: &[FeatureVector], k: usize, target: usize, seed: u64) -> Result<Vec<usize>> {
    if features.is_empty() {
        return Err(Error::Validation("class has no clips".into()));
    }
    let points: Vec<Vec<f64>> = features.iter().map(|f| f.to_array().to_vec()).collect();
    let clusters = kmeans(&standardize(&points), k.min(points.len()), seed)?;
    stratified_sample(&clusters.assignment, target, seed)
}

/// Run [`curate_class`] on every class of `manifest` and return the
/// selected entries in manifest order. Class `c` uses seed `seed + c`.
pub fn curate_manifest(
    manifest: &DatasetManifest,
    features: &BTreeMap<String, FeatureVector>,
    k: usize,
    per_class: usize,
    seed: u64,
) -> Result<DatasetManifest> {
    let mut by_class: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, e) in manifest.entries.iter().enumerate() {
        by_class.entry(e.class_id).or_default().push(i);
    }
    let mut keep = HashSet::new();
    for (class, rows) in &by_class {
        let vectors = rows
            .iter()
            .map(|&r| {
                let id = &manifest.entries[r].clip_id;
                features
                    .get(id)
                    .cloned()
                    .ok_or_else(|| Error::Validation(format!("no features for clip '{id}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let picked = curate_class(&vectors, k, per_class, seed.wrapping_add(*class as u64))
            .map_err(|e| Error::Validation(format!("class {class}: {e}")))?;
        keep.extend(picked.into_iter().map(|p| rows[p]));
    }
    Ok(DatasetManifest {
        entries: (0..manifest.len())
            .filter(|i| keep.contains(i))
            .map(|i| manifest.entries[i].clone())
            .collect(),
        base_dir: manifest.base_dir.clone(),
    })
}
