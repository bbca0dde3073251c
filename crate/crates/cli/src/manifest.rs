//! Run manifests: one JSON file per run recording what was asked for and
//! what came out, written beside the data files.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Full parameter record of the run.
    pub parameters: serde_json::Value,
    /// Data files written by the run, relative to the manifest.
    pub outputs: Vec<String>,
    /// Outcome notes (termination reasons, iteration counts, ...).
    pub notes: serde_json::Value,
    /// Wall-clock timestamp; the single nondeterministic field, excluded
    /// from byte-level reproducibility comparisons.
    pub unix_time_s: f64,
}

impl Manifest {
    pub fn new(command: &str, parameters: serde_json::Value) -> Self {
        Self {
            tool: "selfsim",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters,
            outputs: Vec::new(),
            notes: serde_json::Value::Null,
            unix_time_s: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0),
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.file_name().unwrap_or_default().to_string_lossy().into_owned());
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = dir.join("manifest.json");
        let mut body = serde_json::to_string_pretty(self).expect("manifest serializes");
        body.push('\n');
        std::fs::write(&path, body)?;
        Ok(path)
    }
}
