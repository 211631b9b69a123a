//! Streaming tilted-risk optimization.
//!
//! Batch tilted risk reweights per-sample losses by `exp(t * loss)` inside a
//! log-mean-exp, which interpolates between the average (`t -> 0`), the max
//! (`t -> +inf`) and the min (`t -> -inf`) loss. At batch size one the log
//! cancels the exponential and the tilt disappears. This crate implements
//! the streaming fix: drop the logarithm, minimize `(1/t) exp(t * loss)` per
//! sample, and feed optimizers the raw loss gradient scaled by the positive
//! weight `exp(t * loss)`. Positive tilt amplifies hard samples, negative
//! tilt suppresses outliers, zero recovers plain averaging.
//!
//! Modules:
//! - [`types`]: parameter vectors, samples, tilt settings.
//! - [`losses`]: squared losses and analytic gradients.
//! - [`tilt`]: batch reference forms and the streaming weight.
//! - [`optim`]: SGD, momentum, Adam over pre-weighted gradients.
//! - [`stream`]: seeded synthetic mixtures with labeled outliers.
//! - [`metrics`]: error traces, confusion matrices, ROC/AUC.
//! - [`runner`]: the per-sample training loop and comparisons.
//! - [`presets`]: the published hyperparameter grids.

pub mod error;
pub mod losses;
pub mod metrics;
pub mod optim;
pub mod presets;
pub mod runner;
pub mod stream;
pub mod tilt;
pub mod types;

pub use error::{Error, Result};
pub use losses::{
    classification_loss_eval, linear_predict, linear_score, loss_eval, regression_loss_eval,
    squared_loss, LossEval,
};
pub use metrics::{
    confusion_at_threshold, record_error_trace, roc_curve, ConfusionMatrix, ErrorTracePoint,
    RocCurve, RocPoint,
};
pub use optim::{AdamState, MomentumState, Optimizer, OptimizerConfig, SgdState};
pub use runner::{init_theta, run_comparison, run_experiment, ExperimentConfig, ExperimentResult};
pub use stream::{
    materialize_stream, ClassificationStreamConfig, RegressionStreamConfig, StreamConfig,
    StreamCursor, PRNG_ALGORITHM,
};
pub use tilt::{
    batch_term_grad_weights, batch_term_objective, erm_risk, online_term_objective, tilt_weight,
    tilted_gradient, TiltedGradient,
};
pub use types::{
    dot, euclidean_distance, ParamVector, Sample, Task, TiltConfig, DEFAULT_EXPONENT_CAP,
    T_ZERO_THRESHOLD,
};
