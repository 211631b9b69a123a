//! Named experiment presets: the optimizer/tilt/learning-rate grids used by
//! the reference experiments, with their published hyperparameters.
//!
//! Regression uses one learning rate per tilt sign across all optimizers;
//! classification rates differ per optimizer because the positive tilt
//! inflates gradients (rates go down) and the negative tilt deflates them
//! (rates go up).

use crate::optim::OptimizerConfig;
use crate::runner::ExperimentConfig;
use crate::stream::{ClassificationStreamConfig, RegressionStreamConfig};
use crate::types::{Task, TiltConfig};

/// Which side of zero the preset's tilt sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltSign {
    Negative,
    Positive,
}

/// Run-level settings shared by every member of a preset comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSettings {
    /// Stream seed; also the initialization seed so every member starts from
    /// the same random theta.
    pub seed: u64,
    pub eval_seed: u64,
    pub iterations: usize,
    pub trace_stride: usize,
    pub eval_size: usize,
    pub exponent_cap: f64,
    pub cap_enabled: bool,
}

impl ComparisonSettings {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            eval_seed: seed.wrapping_add(1),
            iterations: 4000,
            trace_stride: 10,
            eval_size: 2000,
            exponent_cap: crate::types::DEFAULT_EXPONENT_CAP,
            cap_enabled: true,
        }
    }

    fn tilt(&self, t: f64) -> TiltConfig {
        TiltConfig {
            t,
            exponent_cap: self.exponent_cap,
            cap_enabled: self.cap_enabled,
        }
    }
}

impl Default for ComparisonSettings {
    fn default() -> Self {
        Self::with_seed(42)
    }
}

/// One regression run on the standard outlier stream.
pub fn regression_run(
    optimizer: OptimizerConfig,
    tilt: f64,
    learning_rate: f64,
    settings: &ComparisonSettings,
) -> ExperimentConfig {
    ExperimentConfig {
        task: Task::Regression,
        tilt: settings.tilt(tilt),
        optimizer,
        learning_rate,
        iterations: settings.iterations,
        trace_stride: settings.trace_stride,
        stream: RegressionStreamConfig::with_seed(settings.seed).into(),
        init_seed: settings.seed,
        eval_seed: settings.eval_seed,
        eval_size: settings.eval_size,
    }
}

/// One classification run on the standard outlier stream.
pub fn classification_run(
    optimizer: OptimizerConfig,
    tilt: f64,
    learning_rate: f64,
    settings: &ComparisonSettings,
) -> ExperimentConfig {
    ExperimentConfig {
        task: Task::Classification,
        tilt: settings.tilt(tilt),
        optimizer,
        learning_rate,
        iterations: settings.iterations,
        trace_stride: settings.trace_stride,
        stream: ClassificationStreamConfig::with_seed(settings.seed).into(),
        init_seed: settings.seed,
        eval_seed: settings.eval_seed,
        eval_size: settings.eval_size,
    }
}

const OPTIMIZERS: [fn() -> OptimizerConfig; 3] = [
    || OptimizerConfig::Sgd,
    OptimizerConfig::momentum_default,
    OptimizerConfig::adam_default,
];

/// The six regression runs (per optimizer: untilted baseline, then the
/// tilted run). Rates: 1e-2 untilted, 1e-2 at t = -0.5, 1e-4 at t = +0.5.
pub fn regression_comparison(
    sign: TiltSign,
    settings: &ComparisonSettings,
) -> Vec<ExperimentConfig> {
    let (tilt, tilted_lr) = match sign {
        TiltSign::Negative => (-0.5, 1e-2),
        TiltSign::Positive => (0.5, 1e-4),
    };
    let mut runs = Vec::with_capacity(6);
    for make in OPTIMIZERS {
        runs.push(regression_run(make(), 0.0, 1e-2, settings));
        runs.push(regression_run(make(), tilt, tilted_lr, settings));
    }
    runs
}

/// The six classification runs (per optimizer: untilted baseline, then the
/// tilted run). Baseline rates (sgd, momentum, adam): 1e-3, 1e-3, 2e-3.
/// Tilted rates: 2e-4, 2e-4, 8e-4 at t = +0.2 and 2e-3, 2e-3, 8e-3 at
/// t = -0.2.
pub fn classification_comparison(
    sign: TiltSign,
    settings: &ComparisonSettings,
) -> Vec<ExperimentConfig> {
    let erm_rates = [1e-3, 1e-3, 2e-3];
    let (tilt, tilted_rates) = match sign {
        TiltSign::Positive => (0.2, [2e-4, 2e-4, 8e-4]),
        TiltSign::Negative => (-0.2, [2e-3, 2e-3, 8e-3]),
    };
    let mut runs = Vec::with_capacity(6);
    for (i, make) in OPTIMIZERS.iter().enumerate() {
        runs.push(classification_run(make(), 0.0, erm_rates[i], settings));
        runs.push(classification_run(make(), tilt, tilted_rates[i], settings));
    }
    runs
}
