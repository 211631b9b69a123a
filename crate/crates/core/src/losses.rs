//! Per-sample squared losses and their analytic gradients.

use crate::error::{Error, Result};
use crate::types::{dot, ParamVector, Sample, Task};

/// A loss value together with its gradient with respect to theta.
#[derive(Debug, Clone, PartialEq)]
pub struct LossEval {
    pub loss: f64,
    pub gradient: Vec<f64>,
}

/// Regression hypothesis `y_hat = theta_0 * x + theta_1`.
pub fn linear_predict(theta: &ParamVector, x: f64) -> Result<f64> {
    if theta.len() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            actual: theta.len(),
        });
    }
    Ok(theta[0] * x + theta[1])
}

/// Linear score `s(x, y) = theta . (x, y, 1)` for a 2-d point.
pub fn linear_score(theta: &ParamVector, point: &[f64]) -> Result<f64> {
    if theta.len() != 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            actual: theta.len(),
        });
    }
    if point.len() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            actual: point.len(),
        });
    }
    dot(&theta.as_slice()[..2], point).map(|s| s + theta[2])
}

/// Squared loss `(prediction - target)^2`, without a 1/2 prefactor.
///
/// The unscaled form is deliberate: the tilt weight is `exp(t * loss)`, so a
/// 1/2 factor would silently halve the effective tilt.
pub fn squared_loss(prediction: f64, target: f64) -> f64 {
    let r = prediction - target;
    r * r
}

/// Squared loss of the linear prediction and its gradient
/// `2 * residual * (x, 1)`.
pub fn regression_loss_eval(theta: &ParamVector, sample: &Sample) -> Result<LossEval> {
    if sample.features.len() != 1 {
        return Err(Error::LengthMismatch {
            expected: 1,
            actual: sample.features.len(),
        });
    }
    let x = sample.features[0];
    let residual = linear_predict(theta, x)? - sample.target;
    Ok(LossEval {
        loss: residual * residual,
        gradient: vec![2.0 * residual * x, 2.0 * residual],
    })
}

/// Squared loss of the linear score against a +/-1 label and its gradient
/// `2 * (score - label) * (x, y, 1)`.
pub fn classification_loss_eval(theta: &ParamVector, sample: &Sample) -> Result<LossEval> {
    if sample.target != -1.0 && sample.target != 1.0 {
        return Err(Error::InvalidLabel(sample.target));
    }
    let score = linear_score(theta, &sample.features)?;
    let residual = score - sample.target;
    Ok(LossEval {
        loss: residual * residual,
        gradient: vec![
            2.0 * residual * sample.features[0],
            2.0 * residual * sample.features[1],
            2.0 * residual,
        ],
    })
}

/// Task dispatch used by the runner.
pub fn loss_eval(task: Task, theta: &ParamVector, sample: &Sample) -> Result<LossEval> {
    match task {
        Task::Regression => regression_loss_eval(theta, sample),
        Task::Classification => classification_loss_eval(theta, sample),
    }
}
