use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const N_CLASSES: u32 = 50;
pub const N_CATEGORIES: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub clip_id: String,
    pub path: PathBuf,
    pub class_id: u32,
    pub class_name: String,
    pub category_id: u32,
}

/// Clips of a dataset with their class labels. Relative paths are resolved
/// against the manifest file's directory by [`DatasetManifest::resolve`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
    /// Directory of the file the manifest was read from.
    pub base_dir: Option<PathBuf>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let m = Self {
            entries,
            base_dir: None,
        };
        m.validate(Path::new("<memory>"))?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        match &self.base_dir {
            Some(dir) if entry.path.is_relative() => dir.join(&entry.path),
            _ => entry.path.clone(),
        }
    }

    fn validate(&self, path: &Path) -> Result<()> {
        let mut seen = HashSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            let schema = |message: String| Error::Schema {
                path: path.to_path_buf(),
                row: i + 1,
                message,
            };
            if e.clip_id.is_empty() {
                return Err(schema("empty clip_id".into()));
            }
            if !seen.insert(e.clip_id.as_str()) {
                return Err(schema(format!("duplicate clip_id '{}'", e.clip_id)));
            }
            if e.class_id >= N_CLASSES {
                return Err(schema(format!("class_id {} outside 0-{}", e.class_id, N_CLASSES - 1)));
            }
            if !(1..=N_CATEGORIES).contains(&e.category_id) {
                return Err(schema(format!(
                    "category_id {} outside 1-{N_CATEGORIES}",
                    e.category_id
                )));
            }
        }
        Ok(())
    }
}

/// Read a manifest CSV with header `clip_id,path,class_id,class_name,category_id`.
/// Row numbers in errors count data rows from 1.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    let mut entries = Vec::new();
    for (i, row) in reader.deserialize::<ManifestEntry>().enumerate() {
        entries.push(row.map_err(|e| csv_error(path, i + 1, e))?);
    }
    let manifest = DatasetManifest {
        entries,
        base_dir: path.parent().map(Path::to_path_buf),
    };
    manifest.validate(path)?;
    Ok(manifest)
}

pub fn write_manifest(manifest: &DatasetManifest, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    for e in &manifest.entries {
        writer.serialize(e).map_err(|err| csv_error(path, 0, err))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_error(path: &Path, row: usize, e: csv::Error) -> Error {
    if let csv::ErrorKind::Io(_) = e.kind() {
        let csv::ErrorKind::Io(io) = e.into_kind() else {
            unreachable!()
        };
        return Error::io(path, io);
    }
    Error::Schema {
        path: path.to_path_buf(),
        row,
        message: e.to_string(),
    }
}
