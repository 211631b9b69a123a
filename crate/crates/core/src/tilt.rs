//! Tilted-risk mathematics.
//!
//! The batch objective `(1/t) log((1/N) sum exp(t l_i))` loses its tilt at
//! N = 1: it reduces to the plain loss no matter what `t` is. The streaming
//! update therefore drops the logarithm and minimizes `(1/t) exp(t l)`
//! instead, whose gradient is the raw loss gradient scaled by the positive
//! weight `exp(t l)`. Batch forms stay here as reference oracles; the
//! online forms are what the runner applies every step.

use crate::error::{Error, Result};
use crate::losses::LossEval;
use crate::types::{TiltConfig, T_ZERO_THRESHOLD};

/// A per-sample gradient after exponential tilt weighting.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedGradient {
    /// The factor `exp(t * loss)`, possibly clamped.
    pub weight: f64,
    /// The untilted loss the weight was derived from.
    pub raw_loss: f64,
    /// `weight * gradient`, elementwise.
    pub weighted_gradient: Vec<f64>,
    /// True when the exponent cap engaged.
    pub clamped: bool,
}

/// Plain average risk `(1/N) sum l_i`.
pub fn erm_risk(losses: &[f64]) -> Result<f64> {
    if losses.is_empty() {
        return Err(Error::EmptyLosses);
    }
    Ok(losses.iter().sum::<f64>() / losses.len() as f64)
}

/// Batch tilted risk `(1/t) log((1/N) sum exp(t l_i))`.
///
/// Computed via max-subtracted log-sum-exp so it stays finite for
/// `|t| * max(l)` far beyond 700. For `|t| < T_ZERO_THRESHOLD` the `t -> 0`
/// limit (the mean) is returned; evaluating the formula there would divide
/// a catastrophically cancelled logarithm by a near-zero tilt.
pub fn batch_term_objective(t: f64, losses: &[f64]) -> Result<f64> {
    if losses.is_empty() {
        return Err(Error::EmptyLosses);
    }
    if t.abs() < T_ZERO_THRESHOLD {
        return erm_risk(losses);
    }
    let max = losses
        .iter()
        .map(|l| t * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = losses.iter().map(|l| (t * l - max).exp()).sum();
    Ok((max + (sum / losses.len() as f64).ln()) / t)
}

/// Gradient weights of the batch tilted risk: the softmax of `t * l_i`.
///
/// Larger losses get larger weight for `t > 0` and smaller weight for
/// `t < 0`; the weights always sum to 1.
pub fn batch_term_grad_weights(t: f64, losses: &[f64]) -> Result<Vec<f64>> {
    if losses.is_empty() {
        return Err(Error::EmptyLosses);
    }
    let max = losses
        .iter()
        .map(|l| t * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = losses.iter().map(|l| (t * l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / sum).collect())
}

/// Streaming tilted objective `(1/t) exp(t * loss)` for a single sample.
///
/// For near-zero tilt this returns the loss itself: the objective value is
/// undefined at t = 0, but its gradient path (weight -> 1) is continuous,
/// so the untilted loss is the natural stand-in.
pub fn online_term_objective(config: &TiltConfig, loss: f64) -> f64 {
    if config.is_zero_tilt() {
        return loss;
    }
    let (exponent, _) = clamp_exponent(config, loss);
    exponent.exp() / config.t
}

/// The tilt weight `exp(t * loss)` and whether the exponent cap engaged.
///
/// Near-zero tilt returns exactly 1.0 so untilted runs reproduce plain
/// SGD bit for bit.
pub fn tilt_weight(config: &TiltConfig, loss: f64) -> (f64, bool) {
    if config.is_zero_tilt() {
        return (1.0, false);
    }
    let (exponent, clamped) = clamp_exponent(config, loss);
    (exponent.exp(), clamped)
}

fn clamp_exponent(config: &TiltConfig, loss: f64) -> (f64, bool) {
    let exponent = config.t * loss;
    if config.cap_enabled && exponent > config.exponent_cap {
        (config.exponent_cap, true)
    } else {
        (exponent, false)
    }
}

/// Scales a loss gradient by the tilt weight. This is the whole online
/// update: optimizers downstream see only the weighted gradient.
pub fn tilted_gradient(config: &TiltConfig, eval: &LossEval) -> TiltedGradient {
    let (weight, clamped) = tilt_weight(config, eval.loss);
    TiltedGradient {
        weight,
        raw_loss: eval.loss,
        weighted_gradient: eval.gradient.iter().map(|g| weight * g).collect(),
        clamped,
    }
}
