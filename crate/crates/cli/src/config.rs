//! Optional JSON run configuration: same keys as the command-line flags,
//! with flags taking precedence.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub m: Option<i32>,
    pub xi: Option<f64>,
    pub levels: Option<usize>,
    pub level: Option<usize>,
    pub backend: Option<String>,
    pub half_width: Option<f64>,
    pub points: Option<usize>,
    pub parity: Option<String>,
    pub tol: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub z: Option<f64>,
    pub eps: Option<f64>,
    pub n_max: Option<u32>,
}

pub fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}
