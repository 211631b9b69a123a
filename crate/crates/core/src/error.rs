use thiserror::Error;

/// Errors raised by contract violations and failed runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two vectors that must have equal lengths do not.
    #[error("vector length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A classification label was not exactly -1 or +1.
    #[error("classification label must be -1 or +1, got {0}")]
    InvalidLabel(f64),

    /// An aggregate over losses received an empty input.
    #[error("loss vector must be non-empty")]
    EmptyLosses,

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// An experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Configs passed to a comparison run disagree on a shared field.
    #[error("comparison configs disagree on {0}")]
    ComparisonMismatch(&'static str),

    /// Parameters left the finite range during training. Usually means the
    /// learning rate is too large for the chosen tilt.
    #[error("parameters diverged at iteration {iteration} (non-finite theta); lower the learning rate or the tilt")]
    Diverged { iteration: usize },

    /// The evaluation set contains only one class, so ROC/AUC is undefined.
    #[error("evaluation set contains a single class; ROC curve is undefined")]
    SingleClassEval,
}

pub type Result<T> = std::result::Result<T, Error>;
