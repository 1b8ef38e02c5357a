//! File schemas and read/write helpers.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use ed3::linalg::{elementwise_abs, AbsoluteMatrix, DensityMatrix, MatrixJson};
use ed3::tomography::PoolManifest;

/// Labeled (or unlabeled) dataset file: the matrices a detect run consumes.
/// `config` echoes the flags the dataset was sampled with.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<bool>>,
    pub matrices: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

/// Serializes as pretty JSON with a trailing newline, creating parent
/// directories as needed. One writer for every artifact keeps reruns
/// byte-identical.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .with_context(|| format!("serializing {}", path.display()))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads a pool manifest and its member density matrices, converted to the
/// absolute matrices the detectors consume. Member paths are relative to the
/// manifest's directory.
pub fn load_pool(manifest_path: &Path) -> Result<(PoolManifest, Vec<AbsoluteMatrix>)> {
    let manifest: PoolManifest = read_json(manifest_path)?;
    let base: PathBuf = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let members = manifest
        .members
        .iter()
        .map(|name| {
            let json: MatrixJson = read_json(&base.join(name))?;
            let rho = DensityMatrix::from_json(&json)
                .with_context(|| format!("validating {name}"))?;
            Ok(elementwise_abs(&rho))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, members))
}
