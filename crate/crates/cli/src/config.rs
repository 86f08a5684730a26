//! Optional TOML config file; command-line flags take precedence.
//!
//! ```toml
//! strategy = "mu"            # su-rd | su-contention | mu
//! stations = 4
//! mcs = 11
//! segment = 1460             # 1460 | 464 | 208
//! n = 256
//! delayed_acks = false
//! strict_paper_timing = true
//! seed = 7
//! cycles = 10000
//! warmup = 100
//! stride = 1
//! out_dir = "curves"
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub strategy: Option<String>,
    pub stations: Option<u32>,
    pub mcs: Option<u8>,
    pub segment: Option<u64>,
    pub n: Option<u64>,
    pub delayed_acks: Option<bool>,
    pub strict_paper_timing: Option<bool>,
    pub seed: Option<u64>,
    pub cycles: Option<u64>,
    pub warmup: Option<u64>,
    pub stride: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| {
            anyhow::Error::new(crate::UsageError(format!(
                "config {}: {e}",
                path.display()
            )))
        })
    }
}
