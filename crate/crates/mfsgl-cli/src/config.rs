//! Run configuration file shared by `fit` and `sweep`.

use std::path::{Path, PathBuf};

use mfsgl::dataset::NormalizeMode;
use mfsgl::solver::SolverConfig;
use mfsgl::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct EvalConfig {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_restarts() -> usize {
    20
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            restarts: default_restarts(),
            seed: 0,
        }
    }
}

/// Grid axes for `sweep`; `fit` ignores them.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct GridConfig {
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RunConfigFile {
    pub manifest: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub normalize: NormalizeMode,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub selection_sizes: Vec<usize>,
    #[serde(default)]
    pub eval: EvalConfig,
    #[serde(default)]
    pub grid: GridConfig,
    /// Sweep worker pool width; 0 means one worker per logical CPU.
    #[serde(default)]
    pub jobs: usize,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileMissing(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        let mut config: RunConfigFile = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        // paths resolve relative to the config file
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if config.manifest.is_relative() {
            config.manifest = base.join(&config.manifest);
        }
        if config.output_dir.is_relative() {
            config.output_dir = base.join(&config.output_dir);
        }
        if !config.manifest.exists() {
            return Err(Error::InvalidConfig(format!(
                "manifest {} does not exist",
                config.manifest.display()
            )));
        }
        Ok(config)
    }
}
