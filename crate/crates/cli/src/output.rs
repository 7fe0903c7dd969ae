use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Both,
}

/// Everything a subcommand produces.
#[derive(Debug, Default)]
pub struct Artifacts {
    /// File name for the human-readable report.
    pub report_name: String,
    pub report: String,
    /// Comma-separated twins, in emission order.
    pub csv: Vec<(String, String)>,
}

impl Artifacts {
    pub fn new(report_name: impl Into<String>) -> Self {
        Artifacts { report_name: report_name.into(), ..Default::default() }
    }

    pub fn add_csv(&mut self, name: impl Into<String>, content: String) {
        self.csv.push((name.into(), content));
    }
}

/// Inputs that identify a run, hashed into the manifest.
#[derive(Debug, Default)]
pub struct RunInputs {
    pub paths: Vec<PathBuf>,
    pub options: BTreeMap<String, String>,
}

impl RunInputs {
    pub fn path(&mut self, p: &Path) {
        self.paths.push(p.to_path_buf());
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.to_string(), value.to_string());
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// SHA-256 over the command, options and input file contents. Line endings are
/// normalised so a checkout on another platform hashes the same.
pub fn config_hash(command: &str, seed: u64, inputs: &RunInputs) -> CliResult<String> {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(seed.to_le_bytes());
    for (k, v) in &inputs.options {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update([0]);
    }
    for p in &inputs.paths {
        let bytes = std::fs::read(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        let text = String::from_utf8_lossy(&bytes).replace("\r\n", "\n");
        h.update((text.len() as u64).to_le_bytes());
        h.update(text.as_bytes());
    }
    Ok(hex::encode(h.finalize()))
}

pub struct Emitter {
    pub format: Format,
    pub output_dir: Option<PathBuf>,
    pub timestamp: bool,
    pub seed: u64,
}

impl Emitter {
    pub fn emit(&self, command: &str, inputs: &RunInputs, artifacts: &Artifacts) -> CliResult<()> {
        let text = matches!(self.format, Format::Text | Format::Both);
        let csv = matches!(self.format, Format::Csv | Format::Both);
        let mut stdout = String::new();
        if text {
            stdout.push_str(&artifacts.report);
        }
        if csv {
            for (name, content) in &artifacts.csv {
                if !stdout.is_empty() {
                    stdout.push('\n');
                }
                stdout.push_str(&format!("# {name}\n{content}"));
            }
        }

        if let Some(dir) = &self.output_dir {
            std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
            if text {
                write_file(&dir.join(&artifacts.report_name), &artifacts.report)?;
            }
            if csv {
                for (name, content) in &artifacts.csv {
                    write_file(&dir.join(name), content)?;
                }
            }
            let manifest = RunManifest {
                command: command.to_string(),
                inputs: inputs.paths.iter().map(|p| p.display().to_string()).collect(),
                config_hash: config_hash(command, self.seed, inputs)?,
                seed: self.seed,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: self.timestamp.then(now_rfc3339),
            };
            let body = toml::to_string(&manifest).map_err(|e| CliError::input(e.to_string()))?;
            write_file(&dir.join("manifest.toml"), &body)?;
        }

        std::io::stdout()
            .lock()
            .write_all(stdout.as_bytes())
            .map_err(|e| CliError::input(format!("stdout: {e}")))
    }
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn now_rfc3339() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

/// File-name-safe form of a scenario or model name.
pub fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    s.trim_matches('_').to_string()
}
