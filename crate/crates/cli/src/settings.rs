//! Flag and config-file resolution.
//!
//! Precedence: built-in defaults < config file (`--config`) < flags. The
//! output directory additionally honors `TILTSTREAM_OUT_DIR` between the
//! default and the flag.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use tiltstream_core::presets::{ComparisonSettings, TiltSign};
use tiltstream_core::{OptimizerConfig, Task, DEFAULT_EXPONENT_CAP};

use crate::error::CliError;

pub const OUT_DIR_ENV: &str = "TILTSTREAM_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerKind {
    Sgd,
    Momentum,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskKind {
    Regression,
    Classification,
}

impl From<TaskKind> for Task {
    fn from(k: TaskKind) -> Task {
        match k {
            TaskKind::Regression => Task::Regression,
            TaskKind::Classification => Task::Classification,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct SharedArgs {
    /// Optimizer for custom runs: sgd, momentum, or adam
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerKind>,

    /// Learning rate for custom runs
    #[arg(long)]
    pub lr: Option<f64>,

    /// Momentum coefficient (only meaningful with --optimizer momentum)
    #[arg(long)]
    pub momentum: Option<f64>,

    /// Training iterations (one sample each)
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Record the parameter trace every this many iterations
    #[arg(long)]
    pub trace_stride: Option<usize>,

    /// Stream seed; also seeds the shared parameter initialization
    /// (default 6)
    #[arg(long)]
    pub seed: Option<u64>,

    /// Seed of the held-out evaluation stream (default: seed + 1)
    #[arg(long)]
    pub eval_seed: Option<u64>,

    /// Held-out evaluation set size (classification)
    #[arg(long)]
    pub eval_size: Option<usize>,

    /// Output directory (default: $TILTSTREAM_OUT_DIR, then ./out)
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Disable the exponent safety cap on t * loss
    #[arg(long)]
    pub no_exp_cap: bool,

    /// Exponent cap value (default 50)
    #[arg(long)]
    pub exp_cap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Named comparison preset: paper-neg-tilt or paper-pos-tilt
    #[arg(long, conflicts_with_all = ["tilt", "optimizer", "lr", "momentum"])]
    pub preset: Option<String>,

    /// Tilt t for a single custom run (default 0: untilted baseline)
    #[arg(long, allow_hyphen_values = true)]
    pub tilt: Option<f64>,

    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Which task to sweep
    #[arg(long, value_enum)]
    pub task: TaskKind,

    /// Comma-separated ascending tilt grid, e.g. "-0.5,0,0.5"
    #[arg(long, allow_hyphen_values = true)]
    pub tilt_grid: Option<String>,

    #[command(flatten)]
    pub shared: SharedArgs,
}

/// Config-file counterpart of the flags. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub tilt: Option<f64>,
    pub optimizer: Option<String>,
    pub lr: Option<f64>,
    pub momentum: Option<f64>,
    pub iterations: Option<usize>,
    pub trace_stride: Option<usize>,
    pub seed: Option<u64>,
    pub eval_seed: Option<u64>,
    pub eval_size: Option<usize>,
    pub exp_cap: Option<f64>,
    pub cap_enabled: Option<bool>,
    pub tilt_grid: Option<Vec<f64>>,
    pub out_dir: Option<PathBuf>,
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub preset: Option<TiltSign>,
    pub tilt: Option<f64>,
    pub optimizer: OptimizerConfig,
    pub lr: Option<f64>,
    pub iterations: usize,
    pub trace_stride: usize,
    pub seed: u64,
    pub eval_seed: u64,
    pub eval_size: usize,
    pub exp_cap: f64,
    pub cap_enabled: bool,
    pub tilt_grid: Option<Vec<f64>>,
    pub out_dir: PathBuf,
}

impl Settings {
    pub fn comparison(&self) -> ComparisonSettings {
        ComparisonSettings {
            seed: self.seed,
            eval_seed: self.eval_seed,
            iterations: self.iterations,
            trace_stride: self.trace_stride,
            eval_size: self.eval_size,
            exponent_cap: self.exp_cap,
            cap_enabled: self.cap_enabled,
        }
    }

    /// Task-dependent fallback when no rate was given: 1e-2 for regression,
    /// 1e-3 for classification.
    pub fn learning_rate(&self, task: Task) -> f64 {
        self.lr.unwrap_or(match task {
            Task::Regression => 1e-2,
            Task::Classification => 1e-3,
        })
    }
}

fn parse_preset(name: &str) -> Result<TiltSign, CliError> {
    match name {
        "paper-neg-tilt" => Ok(TiltSign::Negative),
        "paper-pos-tilt" => Ok(TiltSign::Positive),
        other => Err(CliError::Usage(format!(
            "unknown preset '{other}' (expected paper-neg-tilt or paper-pos-tilt)"
        ))),
    }
}

fn parse_optimizer(name: &str) -> Result<OptimizerKind, CliError> {
    match name {
        "sgd" => Ok(OptimizerKind::Sgd),
        "momentum" => Ok(OptimizerKind::Momentum),
        "adam" => Ok(OptimizerKind::Adam),
        other => Err(CliError::Usage(format!(
            "unknown optimizer '{other}' (expected sgd, momentum, or adam)"
        ))),
    }
}

fn load_file(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config file {}: {e}", path.display())))
}

pub fn parse_tilt_grid(raw: &str) -> Result<Vec<f64>, CliError> {
    let grid: Vec<f64> = raw
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid tilt grid entry '{part}'")))
        })
        .collect::<Result<_, _>>()?;
    validate_grid(&grid)?;
    Ok(grid)
}

fn validate_grid(grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage("tilt grid must not be empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Usage("tilt grid entries must be finite".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "tilt grid must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Merges flags over the optional config file over defaults.
pub fn resolve(
    shared: &SharedArgs,
    preset_flag: Option<&str>,
    tilt_flag: Option<f64>,
    grid_flag: Option<&str>,
) -> Result<Settings, CliError> {
    let file = match &shared.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let preset_name = preset_flag.map(str::to_owned).or(file.preset.clone());
    let preset = preset_name.as_deref().map(parse_preset).transpose()?;

    let tilt = tilt_flag.or(file.tilt);
    let optimizer_kind = match (&shared.optimizer, &file.optimizer) {
        (Some(k), _) => Some(*k),
        (None, Some(name)) => Some(parse_optimizer(name)?),
        (None, None) => None,
    };
    let lr = shared.lr.or(file.lr);
    let momentum = shared.momentum.or(file.momentum);

    if preset.is_some()
        && (tilt.is_some() || optimizer_kind.is_some() || lr.is_some() || momentum.is_some())
    {
        return Err(CliError::Usage(
            "a preset fixes tilt, optimizer, lr, and momentum; drop those settings".into(),
        ));
    }

    let optimizer = match optimizer_kind.unwrap_or(OptimizerKind::Sgd) {
        OptimizerKind::Sgd => OptimizerConfig::Sgd,
        OptimizerKind::Momentum => OptimizerConfig::Momentum {
            momentum: momentum.unwrap_or(0.3),
        },
        OptimizerKind::Adam => OptimizerConfig::adam_default(),
    };

    let tilt_grid = match (grid_flag, &file.tilt_grid) {
        (Some(raw), _) => Some(parse_tilt_grid(raw)?),
        (None, Some(grid)) => {
            validate_grid(grid)?;
            Some(grid.clone())
        }
        (None, None) => None,
    };

    let seed = shared.seed.or(file.seed).unwrap_or(6);
    let out_dir = shared
        .out_dir
        .clone()
        .or(file.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let exp_cap = shared
        .exp_cap
        .or(file.exp_cap)
        .unwrap_or(DEFAULT_EXPONENT_CAP);
    if !exp_cap.is_finite() || exp_cap <= 0.0 {
        return Err(CliError::Usage(format!(
            "--exp-cap must be finite and positive, got {exp_cap}"
        )));
    }
    let cap_enabled = if shared.no_exp_cap {
        false
    } else {
        file.cap_enabled.unwrap_or(true)
    };

    Ok(Settings {
        preset,
        tilt,
        optimizer,
        lr,
        iterations: shared.iterations.or(file.iterations).unwrap_or(4000),
        trace_stride: shared.trace_stride.or(file.trace_stride).unwrap_or(10),
        seed,
        eval_seed: shared
            .eval_seed
            .or(file.eval_seed)
            .unwrap_or_else(|| seed.wrapping_add(1)),
        eval_size: shared.eval_size.or(file.eval_size).unwrap_or(2000),
        exp_cap,
        cap_enabled,
        tilt_grid,
        out_dir,
    })
}
