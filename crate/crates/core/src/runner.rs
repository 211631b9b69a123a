//! Experiment orchestration: stream -> loss -> tilt -> optimizer, one sample
//! per iteration, plus post-run evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::losses::{linear_score, loss_eval};
use crate::metrics::{
    confusion_at_threshold, record_error_trace, roc_curve, ConfusionMatrix, ErrorTracePoint,
    RocCurve,
};
use crate::optim::OptimizerConfig;
use crate::stream::{materialize_stream, StreamConfig};
use crate::tilt::tilted_gradient;
use crate::types::{ParamVector, Sample, Task, TiltConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Theta is probed for finiteness this often so a blown-up run aborts with a
/// clear error instead of emitting NaNs.
const DIVERGENCE_CHECK_STRIDE: usize = 10;

/// Decision threshold used for held-out confusion matrices: labels are +/-1
/// and the squared loss regresses the score toward them, so zero is the
/// midpoint.
pub const DECISION_THRESHOLD: f64 = 0.0;

/// Everything a single run depends on. Results are a pure function of this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    pub tilt: TiltConfig,
    pub optimizer: OptimizerConfig,
    pub learning_rate: f64,
    pub iterations: usize,
    pub trace_stride: usize,
    pub stream: StreamConfig,
    pub init_seed: u64,
    pub eval_seed: u64,
    pub eval_size: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.tilt.validate()?;
        self.optimizer.validate()?;
        self.stream.validate()?;
        if self.task != self.stream.task() {
            return Err(Error::InvalidConfig(format!(
                "task {} does not match the {} stream",
                self.task.name(),
                self.stream.task().name()
            )));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be finite and positive, got {}",
                self.learning_rate
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidConfig("trace_stride must be >= 1".into()));
        }
        if self.task == Task::Classification && self.eval_size < 2 {
            return Err(Error::InvalidConfig(
                "classification needs eval_size >= 2".into(),
            ));
        }
        Ok(())
    }
}

/// The outcome of one run. Regression fills `error_trace`; classification
/// fills `confusion` and `roc`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub final_theta: ParamVector,
    pub error_trace: Option<Vec<ErrorTracePoint>>,
    pub confusion: Option<ConfusionMatrix>,
    pub roc: Option<RocCurve>,
    /// How many iterations hit the exponent cap. Zero whenever a run stays
    /// in its stable regime, so presets can verify the cap never fired.
    pub clamp_events: u64,
    pub config: ExperimentConfig,
}

/// Standard-normal initialization, deterministic under the seed so several
/// optimizers can share one starting point.
pub fn init_theta(dimension: usize, seed: u64) -> ParamVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..dimension)
        .map(|_| rand::Rng::sample::<f64, _>(&mut rng, StandardNormal))
        .collect();
    ParamVector::new(values).expect("standard normal draws are finite")
}

/// Runs one experiment from scratch: materializes the stream, trains one
/// sample at a time, then evaluates.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let samples = materialize_stream(&config.stream, config.iterations);
    run_on_samples(config, &samples)
}

/// Runs several configs over one shared sample sequence. All configs must
/// agree on the task, the stream, and the iteration count; every run then
/// consumes identical samples in identical order.
pub fn run_comparison(configs: &[ExperimentConfig]) -> Result<Vec<ExperimentResult>> {
    let Some(first) = configs.first() else {
        return Ok(Vec::new());
    };
    for config in configs {
        config.validate()?;
        if config.task != first.task {
            return Err(Error::ComparisonMismatch("task"));
        }
        if config.stream.seed() != first.stream.seed() {
            return Err(Error::ComparisonMismatch("stream seed"));
        }
        if config.stream != first.stream {
            return Err(Error::ComparisonMismatch("stream config"));
        }
        if config.iterations != first.iterations {
            return Err(Error::ComparisonMismatch("iterations"));
        }
    }
    let samples = materialize_stream(&first.stream, first.iterations);
    configs
        .iter()
        .map(|config| run_on_samples(config, &samples))
        .collect()
}

fn run_on_samples(config: &ExperimentConfig, samples: &[Sample]) -> Result<ExperimentResult> {
    let dimension = config.task.dimension();
    let mut theta = init_theta(dimension, config.init_seed);
    let mut optimizer = config.optimizer.build(config.learning_rate, dimension);
    let mut history: Vec<(usize, ParamVector)> = Vec::new();
    let mut clamp_events = 0u64;

    for (index, sample) in samples.iter().enumerate() {
        let iteration = index + 1;
        let eval = loss_eval(config.task, &theta, sample)?;
        let tilted = tilted_gradient(&config.tilt, &eval);
        if tilted.clamped {
            clamp_events += 1;
        }
        theta = optimizer.step(&theta, &tilted.weighted_gradient)?;
        if iteration % DIVERGENCE_CHECK_STRIDE == 0 && !theta.is_finite() {
            return Err(Error::Diverged { iteration });
        }
        if iteration % config.trace_stride == 0 {
            history.push((iteration, theta.clone()));
        }
    }
    if !theta.is_finite() {
        return Err(Error::Diverged {
            iteration: samples.len(),
        });
    }

    let mut result = ExperimentResult {
        final_theta: theta,
        error_trace: None,
        confusion: None,
        roc: None,
        clamp_events,
        config: config.clone(),
    };

    match config.task {
        Task::Regression => {
            let StreamConfig::Regression(stream) = &config.stream else {
                unreachable!("validated above");
            };
            // The trace is measured against the stream's own inlier line, so
            // non-default streams still produce meaningful traces.
            let theta_star = ParamVector::new(vec![stream.inlier_slope, stream.inlier_intercept])?;
            result.error_trace = Some(record_error_trace(
                &history,
                &theta_star,
                config.trace_stride,
            )?);
        }
        Task::Classification => {
            let eval_stream = config.stream.reseeded(config.eval_seed);
            let eval_samples = materialize_stream(&eval_stream, config.eval_size);
            let mut scores = Vec::with_capacity(eval_samples.len());
            let mut labels = Vec::with_capacity(eval_samples.len());
            for sample in &eval_samples {
                scores.push(linear_score(&result.final_theta, &sample.features)?);
                labels.push(sample.target);
            }
            result.confusion = Some(confusion_at_threshold(
                &scores,
                &labels,
                DECISION_THRESHOLD,
            )?);
            result.roc = Some(roc_curve(&scores, &labels)?);
        }
    }
    Ok(result)
}
