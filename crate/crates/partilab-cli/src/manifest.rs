//! Reproducibility records. Every subcommand writes a `manifest.json`
//! holding the fully resolved command, its seeds, and SHA-256 digests of
//! every input file, so `partilab replay` can re-execute the run and
//! reproduce its outputs byte for byte.

use chrono::{SecondsFormat, Utc};
use partilab::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::ingest::IngestSpec;
use crate::learn::LearnSpec;
use crate::oracle::OracleSpec;
use crate::solve::SolveSpec;

/// File name of the manifest inside an output directory.
pub const MANIFEST_FILE: &str = "manifest.json";

/// A command with every default and fallback already applied.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ResolvedCommand {
    Solve(SolveSpec),
    Learn(LearnSpec),
    Ingest(IngestSpec),
    Oracle(OracleSpec),
}

/// Record of one CLI run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Version of the binary that produced the run.
    pub version: String,
    /// Wall-clock time of the run in UTC, RFC 3339.
    pub created_utc: String,
    /// SHA-256 digest of each input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    /// The resolved command.
    pub command: ResolvedCommand,
}

/// Hex SHA-256 digest of a file's contents.
pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{:02x}", b)).collect())
}

/// Writes `manifest.json` into `out_dir`, digesting the listed input files.
pub fn write(out_dir: &Path, command: ResolvedCommand, input_paths: &[&str]) -> Result<()> {
    let mut inputs = BTreeMap::new();
    for path in input_paths {
        inputs.insert((*path).to_string(), sha256_file(Path::new(path))?);
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        created_utc: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        inputs,
        command,
    };
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::InvalidInput(format!("manifest serialization failed: {}", e)))?;
    text.push('\n');
    fs::write(out_dir.join(MANIFEST_FILE), text)?;
    Ok(())
}

/// Loads a manifest from a JSON file.
pub fn load(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("manifest: {}", e),
    })
}

/// Checks that every input file recorded in the manifest still has the
/// same digest, so a replay runs against the data it was recorded with.
pub fn verify_inputs(manifest: &RunManifest) -> Result<()> {
    for (path, recorded) in &manifest.inputs {
        let current = sha256_file(Path::new(path))?;
        if &current != recorded {
            return Err(Error::InvalidInput(format!(
                "input file {} changed since the recorded run (digest {} != {})",
                path, current, recorded
            )));
        }
    }
    Ok(())
}
