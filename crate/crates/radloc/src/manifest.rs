//! JSON Lines input files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parses one JSON object per non-blank line, keeping 1-based line numbers.
/// An empty file is an error.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v = serde_json::from_str(line).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?;
        out.push((i + 1, v));
    }
    if out.is_empty() {
        return Err(Error::format(path, "file has no entries"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub image_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_id: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u8>>,
}

/// Batch of entries whose relative paths resolve against `root_dir`, the
/// directory holding the manifest file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub root_dir: PathBuf,
    pub entries: Vec<(usize, ManifestEntry)>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let entries = read_jsonl(path)?;
        let root_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { root_dir, entries })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.root_dir.join(p)
    }
}
