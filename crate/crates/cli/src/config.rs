//! Run configuration: an optional JSON file, overridden field by field by
//! command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dfp_lattice::solver::ModelParams;
use dfp_lattice::{GridSpec, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Keys accepted in a `--config` file. Every key is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dim: Option<usize>,
    pub points: Option<usize>,
    pub h: Option<f64>,
    pub alpha: Option<String>,
    pub mu: Option<f64>,
    pub sigma2: Option<f64>,
    pub hurst: Option<f64>,
    pub p: Option<f64>,
    pub t: Option<f64>,
    pub tau: Option<f64>,
    pub beta: Option<u8>,
    pub c: Option<f64>,
    pub truncation: Option<f64>,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Grid flags.
#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Lattice dimension n (1 to 3).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Sites per axis (even, at least 4).
    #[arg(long)]
    pub points: Option<usize>,
    /// Lattice spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Fractional parameter as "r/s" with r/s <= 1/2.
    #[arg(long)]
    pub alpha: Option<String>,
}

/// Model flags.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Drift mu.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Diffusion sigma^2.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Hurst exponent in (0, 1).
    #[arg(long)]
    pub hurst: Option<f64>,
}

/// Configuration file and output flags.
#[derive(Debug, Clone, Default, Args)]
pub struct IoArgs {
    /// JSON configuration file; flags take precedence over its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Manifest file (default: OUTPUT.json, or standard error without --output).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub fn parse_alpha(text: &str) -> CliResult<Rational> {
    text.parse::<Rational>()
        .map_err(|e| CliError::Usage(format!("alpha must be \"r/s\": {e}")))
}

/// Where the output and the manifest go.
#[derive(Debug, Clone)]
pub struct Sinks {
    pub output: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub format: Format,
}

/// Flags merged over the file configuration.
pub struct Resolver {
    pub file: FileConfig,
}

impl Resolver {
    pub fn new(io: &IoArgs) -> CliResult<Self> {
        let file = match &io.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(Resolver { file })
    }

    /// Whether any grid key was set by flag or file.
    pub fn grid_given(&self, grid: &GridArgs) -> bool {
        let f = &self.file;
        grid.dim.or(f.dim).is_some()
            || grid.points.or(f.points).is_some()
            || grid.h.or(f.h).is_some()
            || grid.alpha.is_some()
            || f.alpha.is_some()
    }

    pub fn grid(&self, grid: &GridArgs) -> CliResult<GridSpec> {
        let f = &self.file;
        let alpha = match grid.alpha.as_ref().or(f.alpha.as_ref()) {
            Some(text) => parse_alpha(text)?,
            None => Rational::ZERO,
        };
        let spec = GridSpec::new(
            grid.dim.or(f.dim).unwrap_or(1),
            grid.h.or(f.h).unwrap_or(1.0),
            alpha,
            grid.points.or(f.points).unwrap_or(32),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }

    pub fn params(&self, model: &ModelArgs, p: Option<f64>) -> CliResult<ModelParams> {
        let f = &self.file;
        let params = ModelParams::new(
            model.mu.or(f.mu).unwrap_or(1.0),
            model.sigma2.or(f.sigma2).unwrap_or(1.0),
            model.hurst.or(f.hurst).unwrap_or(0.5),
            p.or(f.p).unwrap_or(0.0),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(params)
    }

    pub fn sinks(&self, io: &IoArgs) -> Sinks {
        let f = &self.file;
        Sinks {
            output: io.output.clone().or_else(|| f.output.clone()),
            manifest: io.manifest.clone().or_else(|| f.manifest.clone()),
            format: io.format.or(f.format).unwrap_or(Format::Csv),
        }
    }

    pub fn input(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.input.clone())
    }
}
