//! Evaluation: parameter-error traces, confusion matrices, ROC curves, AUC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{euclidean_distance, ParamVector};

/// Distance to the reference parameters at one recorded iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorTracePoint {
    pub iteration: usize,
    pub distance: f64,
}

/// Binary confusion counts; the positive class is the outlier label +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    #[serde(rename = "tp")]
    pub true_positives: u64,
    #[serde(rename = "fp")]
    pub false_positives: u64,
    #[serde(rename = "tn")]
    pub true_negatives: u64,
    #[serde(rename = "fn")]
    pub false_negatives: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }
}

/// One point of an ROC sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub false_positive_rate: f64,
    pub true_positive_rate: f64,
}

/// ROC curve from sweeping the decision threshold over all distinct scores,
/// plus its trapezoidal area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Distances `||theta_k - theta_star||` at stride-aligned iterations.
pub fn record_error_trace(
    theta_history: &[(usize, ParamVector)],
    theta_star: &ParamVector,
    stride: usize,
) -> Result<Vec<ErrorTracePoint>> {
    if stride == 0 {
        return Err(Error::InvalidConfig("trace stride must be >= 1".into()));
    }
    theta_history
        .iter()
        .filter(|(iteration, _)| iteration % stride == 0)
        .map(|(iteration, theta)| {
            Ok(ErrorTracePoint {
                iteration: *iteration,
                distance: euclidean_distance(theta, theta_star)?,
            })
        })
        .collect()
}

fn check_scores_labels(scores: &[f64], labels: &[f64]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    if let Some(l) = labels.iter().find(|l| **l != -1.0 && **l != 1.0) {
        return Err(Error::InvalidLabel(*l));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("scores"));
    }
    Ok(())
}

/// Tallies predictions `score > threshold` against +/-1 labels.
pub fn confusion_at_threshold(
    scores: &[f64],
    labels: &[f64],
    threshold: f64,
) -> Result<ConfusionMatrix> {
    check_scores_labels(scores, labels)?;
    let mut cm = ConfusionMatrix {
        true_positives: 0,
        false_positives: 0,
        true_negatives: 0,
        false_negatives: 0,
    };
    for (score, label) in scores.iter().zip(labels) {
        let predicted_positive = *score > threshold;
        let actual_positive = *label == 1.0;
        match (predicted_positive, actual_positive) {
            (true, true) => cm.true_positives += 1,
            (true, false) => cm.false_positives += 1,
            (false, false) => cm.true_negatives += 1,
            (false, true) => cm.false_negatives += 1,
        }
    }
    Ok(cm)
}

/// Threshold sweep over all distinct score values (equal scores move as one
/// step, which makes the trapezoidal area count tied pairs one half each).
/// The curve always starts at (0,0) and ends at (1,1); both classes must be
/// present or AUC is undefined.
pub fn roc_curve(scores: &[f64], labels: &[f64]) -> Result<RocCurve> {
    check_scores_labels(scores, labels)?;
    let positives = labels.iter().filter(|l| **l == 1.0).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassEval);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are finite")
    });

    let mut points = vec![RocPoint {
        false_positive_rate: 0.0,
        true_positive_rate: 0.0,
    }];
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if labels[order[i]] == 1.0 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            false_positive_rate: fp as f64 / negatives as f64,
            true_positive_rate: tp as f64 / positives as f64,
        });
    }

    let mut auc = 0.0;
    for pair in points.windows(2) {
        auc += (pair[1].false_positive_rate - pair[0].false_positive_rate)
            * (pair[0].true_positive_rate + pair[1].true_positive_rate)
            / 2.0;
    }
    Ok(RocCurve { points, auc })
}
