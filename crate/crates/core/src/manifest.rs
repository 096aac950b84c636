//! Run manifests: one JSON record per run describing what was done and
//! what was written.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;
use crate::io::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub version: String,
    pub seed: Option<u64>,
    pub started_unix: f64,
    pub finished_unix: Option<f64>,
    pub parameters: Map<String, Value>,
    pub outputs: Vec<PathBuf>,
    pub diagnostics: Map<String, Value>,
    pub status: String,
    pub exit_code: i32,
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunManifest {
    pub fn start(command: &str, args: Vec<String>, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            args,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            started_unix: unix_now(),
            finished_unix: None,
            parameters: Map::new(),
            outputs: Vec::new(),
            diagnostics: Map::new(),
            status: "running".into(),
            exit_code: 0,
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) {
        self.diagnostics.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn output(&mut self, path: impl Into<PathBuf>) {
        self.outputs.push(path.into());
    }

    pub fn finish(&mut self, outcome: std::result::Result<(), &crate::Error>) {
        self.finished_unix = Some(unix_now());
        match outcome {
            Ok(()) => {
                self.status = "ok".into();
                self.exit_code = 0;
            }
            Err(e) => {
                self.status = format!("error: {e}");
                self.exit_code = e.exit_code();
            }
        }
    }

    /// Writes `<command>_manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}_manifest.json", self.command.replace(' ', "_")));
        write_json(&path, self)?;
        Ok(path)
    }
}
