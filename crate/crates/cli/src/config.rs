//! Key=value config files for the shared pipeline options.
//!
//! Lines are `key = value`; `#` starts a comment. Keys mirror the shared
//! command-line flags (seed, wavelet, levels, window, theta_step, out_dir),
//! and explicit flags always win over file values.

use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};

/// Resolved shared options after merging defaults, config file, and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub wavelet: String,
    pub levels: usize,
    pub window: usize,
    pub theta_step: f64,
    pub out_dir: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 0,
            wavelet: "sym8".to_string(),
            levels: 4,
            window: 3,
            theta_step: 1.0,
            out_dir: PathBuf::from("."),
        }
    }
}

impl Settings {
    /// Applies `key = value` pairs from `path` on top of `self`.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let parse = |what: &str| {
                format!("{}:{}: bad {what} value {value:?}", path.display(), lineno + 1)
            };
            match key {
                "seed" => self.seed = value.parse().with_context(|| parse("seed"))?,
                "wavelet" => self.wavelet = value.to_string(),
                "levels" => self.levels = value.parse().with_context(|| parse("levels"))?,
                "window" => self.window = value.parse().with_context(|| parse("window"))?,
                "theta_step" => {
                    self.theta_step = value.parse().with_context(|| parse("theta_step"))?
                }
                "out_dir" => self.out_dir = PathBuf::from(value),
                other => bail!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(())
    }
}

/// Shared flags accepted by every subcommand; `None` means "not given".
#[derive(Debug, Clone, Default, clap::Args)]
pub struct SharedFlags {
    /// Config file with key=value pairs (flags override it).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed for anything stochastic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Wavelet family: sym8, db8, or haar.
    #[arg(long, global = true)]
    pub wavelet: Option<String>,
    /// Decomposition depth.
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// NeighShrink neighborhood side (odd).
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Radon angular step in degrees.
    #[arg(long, global = true)]
    pub theta_step: Option<f64>,
    /// Directory for output artifacts.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

impl SharedFlags {
    /// Defaults, overlaid by the config file, overlaid by explicit flags.
    pub fn resolve(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            s.apply_file(path)?;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = &self.wavelet {
            s.wavelet = v.clone();
        }
        if let Some(v) = self.levels {
            s.levels = v;
        }
        if let Some(v) = self.window {
            s.window = v;
        }
        if let Some(v) = self.theta_step {
            s.theta_step = v;
        }
        if let Some(v) = &self.out_dir {
            s.out_dir = v.clone();
        }
        Ok(s)
    }
}
