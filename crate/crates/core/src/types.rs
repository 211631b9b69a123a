//! Shared value types: parameter vectors, streamed samples, tilt settings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this magnitude the tilt is treated as exactly zero and every tilted
/// quantity falls back to its plain-average (untilted) limit.
pub const T_ZERO_THRESHOLD: f64 = 1e-9;

/// Default bound on the exponent `t * loss`. `exp(50)` is about `5.2e21`,
/// comfortably finite in double precision.
pub const DEFAULT_EXPONENT_CAP: f64 = 50.0;

/// Model parameters: a fixed-length dense vector.
///
/// Length 2 for regression, `theta = (slope, intercept)`; length 3 for
/// classification, `theta = (w_x, w_y, bias)` so the score is
/// `theta . (x, y, 1)`. The length never changes after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    /// Builds a parameter vector, rejecting NaN or infinite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("parameter vector"));
        }
        Ok(Self(values))
    }

    /// Builds without the finiteness check. Optimizer steps use this so a
    /// diverging run can be detected by the runner instead of panicking
    /// mid-update.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<usize> for ParamVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for ParamVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Which experiment a config drives. Decides parameter dimension and how
/// samples are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
}

impl Task {
    /// Parameter dimension: 2 for regression, 3 for classification.
    pub fn dimension(self) -> usize {
        match self {
            Task::Regression => 2,
            Task::Classification => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Regression => "regression",
            Task::Classification => "classification",
        }
    }
}

/// One streamed observation.
///
/// `is_outlier` records which mixture branch generated the sample. It exists
/// only so evaluation can compare against ground truth; no learner-visible
/// computation may read it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Length 1 for regression (x), length 2 for classification (x, y).
    pub features: Vec<f64>,
    /// Regression target y, or classification label in {-1, +1}.
    pub target: f64,
    /// Generator provenance, for evaluation only.
    pub is_outlier: bool,
}

impl Sample {
    pub fn regression(x: f64, y: f64, is_outlier: bool) -> Self {
        Self {
            features: vec![x],
            target: y,
            is_outlier,
        }
    }

    /// Builds a classification sample; the label must be exactly -1 or +1.
    pub fn classification(x: f64, y: f64, label: f64, is_outlier: bool) -> Result<Self> {
        if label != -1.0 && label != 1.0 {
            return Err(Error::InvalidLabel(label));
        }
        Ok(Self {
            features: vec![x, y],
            target: label,
            is_outlier,
        })
    }
}

/// Tilt hyperparameter plus numerical-safety settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltConfig {
    /// The tilt `t`. Positive amplifies large losses, negative suppresses
    /// them, zero recovers the untilted update.
    pub t: f64,
    /// Upper bound applied to the exponent `t * loss` before exponentiation.
    pub exponent_cap: f64,
    /// Whether the cap is applied. Every engaged clamp is reported so runs
    /// can verify the cap never fired.
    pub cap_enabled: bool,
}

impl TiltConfig {
    /// Tilt `t` with the default safety cap enabled.
    pub fn new(t: f64) -> Self {
        Self {
            t,
            exponent_cap: DEFAULT_EXPONENT_CAP,
            cap_enabled: true,
        }
    }

    pub fn uncapped(t: f64) -> Self {
        Self {
            t,
            exponent_cap: DEFAULT_EXPONENT_CAP,
            cap_enabled: false,
        }
    }

    /// True when `t` is within [`T_ZERO_THRESHOLD`] of zero and the untilted
    /// limit applies.
    pub fn is_zero_tilt(&self) -> bool {
        self.t.abs() < T_ZERO_THRESHOLD
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::NonFinite("tilt t"));
        }
        if !self.exponent_cap.is_finite() || self.exponent_cap <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "exponent_cap must be finite and positive, got {}",
                self.exponent_cap
            )));
        }
        Ok(())
    }
}

impl Default for TiltConfig {
    fn default() -> Self {
        Self::new(0.0)
    }
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// Euclidean distance `||a - b||_2` between two parameter vectors.
pub fn euclidean_distance(a: &ParamVector, b: &ParamVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
