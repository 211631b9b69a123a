//! File emission: CSV with pinned columns, JSON summary and manifest.
//!
//! CSVs are comma-separated UTF-8 with LF line endings and a header row;
//! float fields carry 17 significant digits so parsing them back is exact.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use tiltstream_core::{ConfusionMatrix, ExperimentConfig};

use crate::error::CliError;

/// 17 significant digits in scientific notation: round-trip exact for f64
/// and locale-independent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Short human label for a run, used in CSV columns, legends, and errors.
pub fn run_label(config: &ExperimentConfig) -> String {
    format!("{} t={}", config.optimizer.name(), config.tilt.t)
}

/// Collects emitted files so the manifest can list every artifact.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let mut file = std::fs::File::create(self.dir.join(name))?;
        file.write_all(contents.as_bytes())?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes `manifest.json` last, listing every artifact including itself.
    pub fn finish(mut self, manifest: ManifestHeader) -> Result<(), CliError> {
        self.written.push("manifest.json".to_string());
        let manifest = Manifest {
            tool: "tiltstream",
            version: env!("CARGO_PKG_VERSION"),
            prng: tiltstream_core::PRNG_ALGORITHM,
            command_line: manifest.command_line,
            configs: manifest.configs,
            outputs: self.written.clone(),
        };
        let json = to_json(&manifest)?;
        let mut file = std::fs::File::create(self.dir.join("manifest.json"))?;
        file.write_all(json.as_bytes())?;
        Ok(())
    }
}

pub struct ManifestHeader {
    pub command_line: Vec<String>,
    pub configs: Vec<ExperimentConfig>,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    prng: &'static str,
    command_line: Vec<String>,
    configs: Vec<ExperimentConfig>,
    outputs: Vec<String>,
}

/// Per-run block of `summary.json`.
#[derive(Serialize)]
pub struct RunSummary {
    pub optimizer: &'static str,
    pub tilt: f64,
    pub learning_rate: f64,
    pub final_theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionMatrix>,
    pub clamp_events: u64,
}

#[derive(Serialize)]
pub struct Summary {
    pub task: &'static str,
    pub iterations: usize,
    pub stream_seed: u64,
    pub eval_seed: u64,
    pub prng: &'static str,
    pub runs: Vec<RunSummary>,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    json.push('\n');
    Ok(json)
}

/// Builds a CSV document from a header and rows of preformatted fields.
pub fn csv_document(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
