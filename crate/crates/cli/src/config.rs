use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// Defaults read from `--config FILE`; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dim: Option<usize>,
    pub lmax: Option<u32>,
    pub grid: Option<usize>,
    pub pair: Option<usize>,
    pub eps: Option<String>,
    pub body: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    BallClass,
    Anstar,
    Construct,
    Witness,
    ClCertify,
    Zonal,
    Verify,
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub dim: Option<usize>,
    pub lmax: Option<u32>,
    pub grid: Option<usize>,
    pub pair: Option<usize>,
    pub eps: Option<String>,
    pub body: Option<PathBuf>,
    pub certificate: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Check dimension range and paths before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.dim {
            if !(2..=5).contains(&d) {
                bail!("dimension {d} is outside the supported range 2..=5");
            }
        }
        for p in [&self.body, &self.certificate].into_iter().flatten() {
            if !p.is_file() {
                bail!("input file {} does not exist", p.display());
            }
        }
        if let Some(out) = &self.out {
            let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !parent.is_dir() {
                bail!("output directory {} does not exist", parent.display());
            }
        }
        Ok(())
    }

    pub fn require_dim(&self) -> Result<usize> {
        self.dim.context("--dim is required")
    }
}
