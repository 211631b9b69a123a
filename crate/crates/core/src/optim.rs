//! First-order update rules: SGD, SGD with momentum, Adam.
//!
//! Optimizers are tilt-agnostic by construction: they accept a bare gradient
//! vector and never see the loss or the weight it was scaled by.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::ParamVector;

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Plain SGD: `theta' = theta - lr * g`. Stateless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgdState {
    pub learning_rate: f64,
}

impl SgdState {
    pub fn new(learning_rate: f64) -> Self {
        Self { learning_rate }
    }

    pub fn step(&self, theta: &ParamVector, gradient: &[f64]) -> Result<ParamVector> {
        check_len(theta.len(), gradient.len())?;
        Ok(ParamVector::from_raw(
            theta
                .as_slice()
                .iter()
                .zip(gradient)
                .map(|(t, g)| t - self.learning_rate * g)
                .collect(),
        ))
    }
}

/// Heavy-ball momentum: `v' = mu * v + g`, `theta' = theta - lr * v'`.
///
/// The gradient is accumulated unscaled into the velocity; the alternative
/// `v' = mu v + lr g` only reparameterizes the learning rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumState {
    pub learning_rate: f64,
    pub momentum: f64,
    pub velocity: Vec<f64>,
}

impl MomentumState {
    pub fn new(learning_rate: f64, momentum: f64, dimension: usize) -> Self {
        Self {
            learning_rate,
            momentum,
            velocity: vec![0.0; dimension],
        }
    }

    pub fn step(&mut self, theta: &ParamVector, gradient: &[f64]) -> Result<ParamVector> {
        check_len(theta.len(), gradient.len())?;
        check_len(self.velocity.len(), gradient.len())?;
        for (v, g) in self.velocity.iter_mut().zip(gradient) {
            *v = self.momentum * *v + g;
        }
        Ok(ParamVector::from_raw(
            theta
                .as_slice()
                .iter()
                .zip(&self.velocity)
                .map(|(t, v)| t - self.learning_rate * v)
                .collect(),
        ))
    }
}

/// Adam with bias-corrected first and second moments.
///
/// The update divides by `sqrt(v_hat + epsilon_bar) + epsilon`. The extra
/// additive term inside the square root is kept as a parameter even though
/// it is zero in every shipped preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epsilon_bar: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(
        learning_rate: f64,
        beta1: f64,
        beta2: f64,
        epsilon: f64,
        epsilon_bar: f64,
        dimension: usize,
    ) -> Self {
        Self {
            learning_rate,
            beta1,
            beta2,
            epsilon,
            epsilon_bar,
            m: vec![0.0; dimension],
            v: vec![0.0; dimension],
            step_count: 0,
        }
    }

    pub fn step(&mut self, theta: &ParamVector, gradient: &[f64]) -> Result<ParamVector> {
        check_len(theta.len(), gradient.len())?;
        check_len(self.m.len(), gradient.len())?;
        self.step_count += 1;
        let bias1 = 1.0 - self.beta1.powi(self.step_count as i32);
        let bias2 = 1.0 - self.beta2.powi(self.step_count as i32);
        let mut next = Vec::with_capacity(theta.len());
        for i in 0..gradient.len() {
            let g = gradient[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bias1;
            let v_hat = self.v[i] / bias2;
            next.push(
                theta[i]
                    - self.learning_rate * m_hat
                        / ((v_hat + self.epsilon_bar).sqrt() + self.epsilon),
            );
        }
        Ok(ParamVector::from_raw(next))
    }
}

/// A live optimizer owned by one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub enum Optimizer {
    Sgd(SgdState),
    Momentum(MomentumState),
    Adam(AdamState),
}

impl Optimizer {
    pub fn step(&mut self, theta: &ParamVector, gradient: &[f64]) -> Result<ParamVector> {
        match self {
            Optimizer::Sgd(s) => s.step(theta, gradient),
            Optimizer::Momentum(s) => s.step(theta, gradient),
            Optimizer::Adam(s) => s.step(theta, gradient),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Optimizer::Sgd(_) => "sgd",
            Optimizer::Momentum(_) => "momentum",
            Optimizer::Adam(_) => "adam",
        }
    }
}

/// Serializable optimizer choice used inside experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerConfig {
    Sgd,
    Momentum {
        momentum: f64,
    },
    Adam {
        beta1: f64,
        beta2: f64,
        epsilon: f64,
        epsilon_bar: f64,
    },
}

impl OptimizerConfig {
    /// Momentum 0.3, the value every shipped preset uses.
    pub fn momentum_default() -> Self {
        OptimizerConfig::Momentum { momentum: 0.3 }
    }

    /// Adam(0.9, 0.999, 1e-8, 0), the value every shipped preset uses.
    pub fn adam_default() -> Self {
        OptimizerConfig::Adam {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epsilon_bar: 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerConfig::Sgd => "sgd",
            OptimizerConfig::Momentum { .. } => "momentum",
            OptimizerConfig::Adam { .. } => "adam",
        }
    }

    pub fn build(&self, learning_rate: f64, dimension: usize) -> Optimizer {
        match *self {
            OptimizerConfig::Sgd => Optimizer::Sgd(SgdState::new(learning_rate)),
            OptimizerConfig::Momentum { momentum } => {
                Optimizer::Momentum(MomentumState::new(learning_rate, momentum, dimension))
            }
            OptimizerConfig::Adam {
                beta1,
                beta2,
                epsilon,
                epsilon_bar,
            } => Optimizer::Adam(AdamState::new(
                learning_rate,
                beta1,
                beta2,
                epsilon,
                epsilon_bar,
                dimension,
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OptimizerConfig::Sgd => Ok(()),
            OptimizerConfig::Momentum { momentum } => {
                if !(0.0..1.0).contains(&momentum) {
                    return Err(Error::InvalidConfig(format!(
                        "momentum must lie in [0, 1), got {momentum}"
                    )));
                }
                Ok(())
            }
            OptimizerConfig::Adam {
                beta1,
                beta2,
                epsilon,
                epsilon_bar,
            } => {
                if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) {
                    return Err(Error::InvalidConfig(format!(
                        "adam betas must lie in [0, 1), got ({beta1}, {beta2})"
                    )));
                }
                if epsilon <= 0.0 || epsilon_bar < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "adam requires epsilon > 0 and epsilon_bar >= 0, got ({epsilon}, {epsilon_bar})"
                    )));
                }
                Ok(())
            }
        }
    }
}
