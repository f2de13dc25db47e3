//! CSV files with `#` metadata lines, and the JSON run summary.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Output directory plus the metadata stamped on every file.
pub struct Artifacts {
    pub dir: PathBuf,
    pub subcommand: String,
    pub config_hash: String,
    pub seed: u64,
    pub files: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path, subcommand: &str, config_hash: String, seed: u64) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Artifacts { dir: dir.to_path_buf(), subcommand: subcommand.into(), config_hash, seed, files: Vec::new() })
    }

    /// Writes `name` with the metadata block, the header row and `rows`.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
        let mut f = File::create(self.dir.join(name))?;
        writeln!(f, "# twoscale {}", self.subcommand)?;
        writeln!(f, "# schema_version: {}", crate::config::SCHEMA_VERSION)?;
        writeln!(f, "# config_sha256: {}", self.config_hash)?;
        writeln!(f, "# seed: {}", self.seed)?;
        let mut w = csv::Writer::from_writer(f);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        self.files.push(name.into());
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        std::fs::write(self.dir.join(name), body)?;
        self.files.push(name.into());
        Ok(())
    }
}

/// Shortest round-trip formatting, so reruns give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub subcommand: String,
    pub schema_version: u32,
    pub config_sha256: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: BTreeMap<String, bool>,
    pub numbers: BTreeMap<String, Value>,
    pub files: Vec<String>,
    pub wall_seconds: f64,
}

impl RunSummary {
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect()
    }
}
