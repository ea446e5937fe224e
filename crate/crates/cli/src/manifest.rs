use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

/// Record of one run. Everything except the two timestamps is a function of
/// the command line and the input files.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Collects inputs and outputs while a command runs.
pub struct Recorder {
    command_line: Vec<String>,
    seed: u64,
    started: u64,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl Recorder {
    pub fn new(seed: u64) -> Self {
        Self {
            command_line: std::env::args().collect(),
            seed,
            started: unix_now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    fn hashes(paths: &[PathBuf]) -> Result<Vec<FileHash>> {
        paths
            .iter()
            .map(|p| {
                Ok(FileHash {
                    path: p.display().to_string(),
                    sha256: sha256_file(p)?,
                })
            })
            .collect()
    }

    /// Writes `<primary>.manifest.json` next to the primary output, or prints
    /// the manifest to stderr when everything went to stdout.
    pub fn finish(self, primary: Option<&Path>) -> Result<()> {
        let manifest = RunManifest {
            command_line: self.command_line,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started,
            finished_unix: unix_now(),
            inputs: Self::hashes(&self.inputs)?,
            outputs: Self::hashes(&self.outputs)?,
        };
        match primary {
            Some(p) => {
                let mut name = p.as_os_str().to_owned();
                name.push(".manifest.json");
                let path = PathBuf::from(name);
                fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            None => eprintln!("{}", serde_json::to_string(&manifest)?),
        }
        Ok(())
    }
}
