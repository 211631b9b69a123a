//! Shared fixtures for the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiltstream_core::presets::{classification_run, regression_run, ComparisonSettings};
use tiltstream_core::{ExperimentConfig, OptimizerConfig};

/// Scores and +/-1 labels with frequent ties, for metric benches.
pub fn synthetic_scores(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scores = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        scores.push((rng.random_range(-40..=40) as f64) / 8.0);
        labels.push(if rng.random::<f64>() < 0.1 { 1.0 } else { -1.0 });
    }
    labels[0] = 1.0;
    labels[n - 1] = -1.0;
    (scores, labels)
}

pub fn regression_config(tilt: f64, learning_rate: f64) -> ExperimentConfig {
    regression_run(
        OptimizerConfig::Sgd,
        tilt,
        learning_rate,
        &ComparisonSettings::with_seed(6),
    )
}

pub fn classification_config(tilt: f64, learning_rate: f64) -> ExperimentConfig {
    classification_run(
        OptimizerConfig::adam_default(),
        tilt,
        learning_rate,
        &ComparisonSettings::with_seed(6),
    )
}
