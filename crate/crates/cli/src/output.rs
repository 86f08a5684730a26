//! Output files: atomic writes, digests and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").unwrap();
    }
    out
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn json_bytes<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a command and check its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub table_version: &'static str,
    /// Arguments after the program name; re-run with `ax-goodput <args>`.
    pub args: Vec<String>,
    pub scenario: serde_json::Value,
    pub seeds: Vec<u64>,
    pub rng_algorithm: Option<String>,
    pub timing_mode: String,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(scenario: serde_json::Value, timing_mode: String) -> Self {
        RunManifest {
            tool: env!("CARGO_BIN_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            table_version: ax_goodput::phy_tables::TABLE_VERSION,
            args: std::env::args().skip(1).collect(),
            scenario,
            seeds: Vec::new(),
            rng_algorithm: None,
            timing_mode,
            outputs: Vec::new(),
        }
    }
}

/// Collects output files and writes them with a manifest.
pub struct OutputSet {
    manifest: RunManifest,
    written: Vec<PathBuf>,
}

impl OutputSet {
    pub fn new(manifest: RunManifest) -> Self {
        OutputSet {
            manifest,
            written: Vec::new(),
        }
    }

    pub fn manifest_mut(&mut self) -> &mut RunManifest {
        &mut self.manifest
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
        write_atomic(path, bytes)?;
        self.manifest.outputs.push(OutputEntry {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        self.written.push(path.to_path_buf());
        Ok(())
    }

    /// Writes the manifest to `path` unless nothing was written.
    pub fn finish(self, path: &Path) -> anyhow::Result<Option<PathBuf>> {
        if self.written.is_empty() {
            return Ok(None);
        }
        write_atomic(path, &json_bytes(&self.manifest)?)?;
        Ok(Some(path.to_path_buf()))
    }
}

/// `<file>.manifest.json` next to `file`.
pub fn manifest_path_for(file: &Path) -> PathBuf {
    let mut p = file.as_os_str().to_owned();
    p.push(".manifest.json");
    PathBuf::from(p)
}
