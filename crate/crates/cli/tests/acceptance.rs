//! Acceptance suite. One test per criterion; each prints a PASS line with
//! the measured quantity (run with `--nocapture` to see them all), and a
//! failing criterion panics with the measured counts.

use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiltstream_core::presets::{classification_run, regression_run, ComparisonSettings};
use tiltstream_core::{
    batch_term_grad_weights, batch_term_objective, loss_eval, online_term_objective, roc_curve,
    run_comparison, tilt_weight, tilted_gradient, Error, ExperimentResult, OptimizerConfig,
    ParamVector, Sample, Task, TiltConfig,
};

/// Criterion 1: with a single sample the batch tilted objective equals the
/// raw loss for any tilt; the streaming form exists because of this.
#[test]
fn criterion_01_single_sample_degeneration() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut t: f64 = rng.random_range(-5.0..5.0);
        while t == 0.0 {
            t = rng.random_range(-5.0..5.0);
        }
        let loss: f64 = rng.random_range(0.0..100.0);
        let value = batch_term_objective(t, &[loss]).unwrap();
        worst = worst.max((value - loss).abs());
    }
    assert!(worst <= 1e-9, "max |objective - loss| = {worst:e}");
    println!("criterion 01 (N=1 degeneration): PASS, max deviation {worst:.3e}");
}

/// Criterion 2: at t = 1e-12 the batch objective is the mean and the
/// gradient weights are uniform.
#[test]
fn criterion_02_erm_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let t = 1e-12;
    let mut worst_obj: f64 = 0.0;
    let mut worst_weight: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(1..=32);
        let losses: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
        let mean = losses.iter().sum::<f64>() / n as f64;
        let objective = batch_term_objective(t, &losses).unwrap();
        worst_obj = worst_obj.max((objective - mean).abs());
        let weights = batch_term_grad_weights(t, &losses).unwrap();
        for w in weights {
            worst_weight = worst_weight.max((w - 1.0 / n as f64).abs());
        }
    }
    assert!(worst_obj <= 1e-6, "objective vs mean: {worst_obj:e}");
    assert!(worst_weight <= 1e-6, "weights vs uniform: {worst_weight:e}");
    println!(
        "criterion 02 (ERM limit): PASS, objective dev {worst_obj:.3e}, weight dev {worst_weight:.3e}"
    );
}

fn central_difference_of_online_objective(
    task: Task,
    config: &TiltConfig,
    theta: &ParamVector,
    sample: &Sample,
) -> Vec<f64> {
    let base = theta.as_slice().to_vec();
    (0..base.len())
        .map(|i| {
            let h = 1e-6 * base[i].abs().max(1.0);
            let eval_at = |v: Vec<f64>| {
                let th = ParamVector::new(v).unwrap();
                let loss = loss_eval(task, &th, sample).unwrap().loss;
                online_term_objective(config, loss)
            };
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[i] += h;
            minus[i] -= h;
            (eval_at(plus) - eval_at(minus)) / (2.0 * h)
        })
        .collect()
}

/// Criterion 3: the streaming tilted gradient is the true gradient of the
/// streaming objective, through both losses.
#[test]
fn criterion_03_online_gradient_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for task in [Task::Regression, Task::Classification] {
        let mut checked = 0;
        while checked < 100 {
            let d = task.dimension();
            let theta =
                ParamVector::new((0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap();
            let sample = match task {
                Task::Regression => Sample::regression(
                    rng.random_range(-4.0..4.0),
                    rng.random_range(-4.0..4.0),
                    false,
                ),
                Task::Classification => Sample::classification(
                    rng.random_range(-4.0..4.0),
                    rng.random_range(-4.0..4.0),
                    if rng.random::<bool>() { 1.0 } else { -1.0 },
                    false,
                )
                .unwrap(),
            };
            let t: f64 = rng.random_range(-1.5..1.5);
            let eval = loss_eval(task, &theta, &sample).unwrap();
            if t.abs() < 1e-2 || (t * eval.loss).abs() > 10.0 {
                continue;
            }
            let config = TiltConfig::uncapped(t);
            let analytic = tilted_gradient(&config, &eval).weighted_gradient;
            let fd = central_difference_of_online_objective(task, &config, &theta, &sample);
            let diff: f64 = analytic
                .iter()
                .zip(&fd)
                .map(|(a, f)| (a - f) * (a - f))
                .sum::<f64>()
                .sqrt();
            let norm: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
            let relative = diff / norm.max(1e-8);
            worst = worst.max(relative);
            assert!(
                relative <= 1e-5,
                "task {task:?}: relative gradient error {relative:e}"
            );
            checked += 1;
        }
    }
    println!(
        "criterion 03 (online gradient vs finite differences): PASS, worst rel err {worst:.3e}"
    );
}

/// Criterion 4: the stabilized softmax weights reproduce the batch gradient
/// assembled from raw exponentials, and always sum to one.
#[test]
fn criterion_04_batch_gradient_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst_grad: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let t: f64 = rng.random_range(-5.0..5.0);
        let losses: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..30.0)).collect();
        let gradients: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)])
            .collect();

        // Oracle route: raw exponentials, no max subtraction.
        let raw: Vec<f64> = losses.iter().map(|l| (t * l).exp()).collect();
        let raw_sum: f64 = raw.iter().sum();
        let mut oracle = [0.0f64; 2];
        for (w, g) in raw.iter().zip(&gradients) {
            oracle[0] += w / raw_sum * g[0];
            oracle[1] += w / raw_sum * g[1];
        }

        let weights = batch_term_grad_weights(t, &losses).unwrap();
        worst_sum = worst_sum.max((weights.iter().sum::<f64>() - 1.0).abs());
        let mut assembled = [0.0f64; 2];
        for (w, g) in weights.iter().zip(&gradients) {
            assembled[0] += w * g[0];
            assembled[1] += w * g[1];
        }
        for axis in 0..2 {
            worst_grad = worst_grad.max((assembled[axis] - oracle[axis]).abs());
        }
    }
    assert!(
        worst_grad <= 1e-10,
        "gradient route mismatch {worst_grad:e}"
    );
    assert!(worst_sum <= 1e-12, "weight sum deviation {worst_sum:e}");
    println!(
        "criterion 04 (batch gradient oracle): PASS, grad dev {worst_grad:.3e}, sum dev {worst_sum:.3e}"
    );
}

fn final_error(result: &ExperimentResult) -> f64 {
    result
        .error_trace
        .as_ref()
        .expect("regression runs carry a trace")
        .last()
        .expect("non-empty trace")
        .distance
}

/// Criterion 5: on the contaminated regression stream, the negatively
/// tilted run lands near the inlier parameters and beats the untilted
/// baseline, per optimizer, across seeds.
#[test]
fn criterion_05_robust_regression_separation() {
    let optimizers = [
        OptimizerConfig::Sgd,
        OptimizerConfig::momentum_default(),
        OptimizerConfig::adam_default(),
    ];
    let mut summaries = Vec::new();
    for (i, optimizer) in optimizers.iter().enumerate() {
        let mut below_threshold = 0;
        let mut beats_erm = 0;
        for seed in 0..20u64 {
            let settings = ComparisonSettings::with_seed(seed);
            let erm = regression_run(*optimizer, 0.0, 1e-2, &settings);
            let term = regression_run(*optimizer, -0.5, 1e-2, &settings);
            let results = run_comparison(&[erm, term]).unwrap();
            let (erm_err, term_err) = (final_error(&results[0]), final_error(&results[1]));
            if term_err < 0.15 {
                below_threshold += 1;
            }
            if term_err < erm_err {
                beats_erm += 1;
            }
        }
        summaries.push(format!(
            "{}: tilted<0.15 {below_threshold}/20, tilted<baseline {beats_erm}/20",
            optimizer.name()
        ));
        if i == 0 {
            assert!(
                below_threshold >= 18,
                "sgd tilted run under 0.15 for only {below_threshold}/20 seeds"
            );
        }
        assert!(
            beats_erm >= 18,
            "{} tilted run beat the baseline for only {beats_erm}/20 seeds",
            optimizer.name()
        );
    }
    println!(
        "criterion 05 (robust regression separation): PASS, {}",
        summaries.join("; ")
    );
}

/// Criterion 6: the untilted SGD baseline converges to the population
/// least-squares intercept of the mixture, 0.9*(-2) + 0.1*(+2) = -1.6,
/// within 0.15 on at least 18 of 20 seeds.
#[test]
fn criterion_06_erm_bias_anchor() {
    // Closed-form anchor cross-checked by exact least squares on a large
    // materialized stream: solve min sum (a*x + b - y)^2 directly.
    let stream = tiltstream_core::RegressionStreamConfig::with_seed(1234).into();
    let samples = tiltstream_core::materialize_stream(&stream, 200_000);
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for s in &samples {
        let (x, y) = (s.features[0], s.target);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    assert!(
        (intercept - (-1.6)).abs() < 0.03,
        "least-squares oracle intercept {intercept} disagrees with the -1.6 anchor"
    );

    let mut within_band = 0;
    let mut intercepts = Vec::new();
    for seed in 0..20u64 {
        let settings = ComparisonSettings::with_seed(seed);
        let erm = regression_run(OptimizerConfig::Sgd, 0.0, 1e-2, &settings);
        let result = tiltstream_core::run_experiment(&erm).unwrap();
        let b = result.final_theta[1];
        intercepts.push(b);
        if (b - (-1.6)).abs() < 0.15 {
            within_band += 1;
        }
    }
    println!(
        "criterion 06 (ERM bias anchor): ls-oracle intercept {intercept:.4}, final intercepts within 0.15 of -1.6 on {within_band}/20 seeds"
    );
    assert!(
        within_band >= 18,
        "final intercept within 0.15 of -1.6 on only {within_band}/20 seeds \
         (single-iterate SGD noise: sample std {:.3})",
        standard_deviation(&intercepts)
    );
}

fn standard_deviation(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64).sqrt()
}

struct DirectionalCounts {
    favorable: usize,
    diverged: usize,
}

fn classification_directional(
    tilt: f64,
    erm_rates: [f64; 3],
    term_rates: [f64; 3],
    favors: impl Fn(&tiltstream_core::ConfusionMatrix, &tiltstream_core::ConfusionMatrix) -> bool,
) -> Vec<(&'static str, DirectionalCounts)> {
    let optimizers = [
        OptimizerConfig::Sgd,
        OptimizerConfig::momentum_default(),
        OptimizerConfig::adam_default(),
    ];
    optimizers
        .iter()
        .enumerate()
        .map(|(i, optimizer)| {
            let mut counts = DirectionalCounts {
                favorable: 0,
                diverged: 0,
            };
            for seed in 0..10u64 {
                let settings = ComparisonSettings::with_seed(seed);
                let erm = classification_run(*optimizer, 0.0, erm_rates[i], &settings);
                let term = classification_run(*optimizer, tilt, term_rates[i], &settings);
                match run_comparison(&[erm, term]) {
                    Ok(results) => {
                        let erm_cm = results[0].confusion.unwrap();
                        let term_cm = results[1].confusion.unwrap();
                        if favors(&term_cm, &erm_cm) {
                            counts.favorable += 1;
                        }
                    }
                    Err(Error::Diverged { .. }) => counts.diverged += 1,
                    Err(other) => panic!("unexpected error: {other}"),
                }
            }
            (optimizer.name(), counts)
        })
        .collect()
}

/// Criterion 7: positive tilt raises true positives and lowers false
/// negatives relative to the untilted baseline, per optimizer, on at least
/// 8 of 10 seeds. A diverged run counts as an unfavorable seed.
#[test]
fn criterion_07_positive_tilt_recall() {
    let counts =
        classification_directional(0.2, [1e-3, 1e-3, 2e-3], [2e-4, 2e-4, 8e-4], |term, erm| {
            term.true_positives >= erm.true_positives && term.false_negatives <= erm.false_negatives
        });
    let report: Vec<String> = counts
        .iter()
        .map(|(name, c)| {
            format!(
                "{name}: favorable {}/10 (diverged {})",
                c.favorable, c.diverged
            )
        })
        .collect();
    println!("criterion 07 (positive-tilt recall): {}", report.join("; "));
    for (name, c) in &counts {
        assert!(
            c.favorable >= 8,
            "{name}: TP/FN improved on only {}/10 seeds ({} tilted runs diverged from the \
             N(0,1) init; exp(t*loss) transients overwhelm sgd-style updates)",
            c.favorable,
            c.diverged
        );
    }
}

/// Criterion 8: negative tilt lowers false positives and raises true
/// negatives relative to the untilted baseline, per optimizer, on at least
/// 8 of 10 seeds.
#[test]
fn criterion_08_negative_tilt_specificity() {
    let counts =
        classification_directional(-0.2, [1e-3, 1e-3, 2e-3], [2e-3, 2e-3, 8e-3], |term, erm| {
            term.false_positives <= erm.false_positives && term.true_negatives >= erm.true_negatives
        });
    let report: Vec<String> = counts
        .iter()
        .map(|(name, c)| {
            format!(
                "{name}: favorable {}/10 (diverged {})",
                c.favorable, c.diverged
            )
        })
        .collect();
    println!(
        "criterion 08 (negative-tilt specificity): {}",
        report.join("; ")
    );
    for (name, c) in &counts {
        assert!(
            c.favorable >= 8,
            "{name}: FP/TN improved on only {}/10 seeds",
            c.favorable
        );
    }
}

/// Criterion 9: trapezoidal AUC equals the Mann-Whitney pair statistic
/// (ties one half) on random instances.
#[test]
fn criterion_09_auc_pair_counting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst: f64 = 0.0;
    for round in 0..500 {
        let n = rng.random_range(2..=200);
        let tie_prone = round % 2 == 0;
        let mut scores = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            scores.push(if tie_prone {
                (rng.random_range(-5..=5) as f64) / 2.0
            } else {
                rng.random_range(-10.0..10.0)
            });
            labels.push(if rng.random::<f64>() < 0.4 { 1.0 } else { -1.0 });
        }
        labels[0] = 1.0;
        labels[n - 1] = -1.0;

        let auc = roc_curve(&scores, &labels).unwrap().auc;
        let mut concordant = 0.0;
        let mut pairs = 0.0;
        for (sp, lp) in scores.iter().zip(&labels) {
            if *lp != 1.0 {
                continue;
            }
            for (sn, ln) in scores.iter().zip(&labels) {
                if *ln != -1.0 {
                    continue;
                }
                pairs += 1.0;
                if sp > sn {
                    concordant += 1.0;
                } else if sp == sn {
                    concordant += 0.5;
                }
            }
        }
        worst = worst.max((auc - concordant / pairs).abs());
    }
    assert!(worst <= 1e-12, "AUC vs pair counting deviation {worst:e}");
    println!("criterion 09 (AUC oracle): PASS, worst deviation {worst:.3e}");
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tiltstream"))
        .args(args)
        .env_remove("TILTSTREAM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|entry| {
            let entry = entry.unwrap();
            (
                entry.file_name().into_string().unwrap(),
                std::fs::read(entry.path()).unwrap(),
            )
        })
        .collect();
    files.sort_by(|a, b| a.0.cmp(&b.0));
    files
}

/// Criterion 10: identical invocations produce byte-identical CSV, JSON,
/// and SVG outputs.
#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out_str = out.to_str().unwrap().to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "regress",
            "--preset",
            "paper-neg-tilt",
            "--iterations",
            "600",
            "--seed",
            "6",
            "--out-dir",
            &out_str,
        ],
        vec![
            "classify",
            "--preset",
            "paper-pos-tilt",
            "--iterations",
            "600",
            "--seed",
            "6",
            "--out-dir",
            &out_str,
        ],
        vec![
            "sweep",
            "--task",
            "regression",
            "--tilt-grid",
            "-0.5,-0.2,0",
            "--iterations",
            "600",
            "--seed",
            "6",
            "--out-dir",
            &out_str,
        ],
    ];
    for args in &invocations {
        let first = run_cli(args);
        assert!(
            first.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        let before = snapshot(&out);
        assert!(!before.is_empty());
        let second = run_cli(args);
        assert!(second.status.success());
        let after = snapshot(&out);
        assert_eq!(
            before.len(),
            after.len(),
            "{args:?} produced a different file set"
        );
        for ((name_a, bytes_a), (name_b, bytes_b)) in before.iter().zip(&after) {
            assert_eq!(name_a, name_b);
            assert_eq!(bytes_a, bytes_b, "{args:?}: {name_a} differs between runs");
        }
        std::fs::remove_dir_all(&out).unwrap();
    }
    println!("criterion 10 (CLI determinism): PASS, three commands byte-identical across reruns");
}

/// Criterion 11: the tilt weight is strictly monotone in the loss with the
/// sign of t, and exactly one at t = 0.
#[test]
fn criterion_11_tilt_weight_monotonicity() {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
    for &t in &[0.1, 0.2, 0.5] {
        let config = TiltConfig::new(t);
        for pair in grid.windows(2) {
            let (w1, _) = tilt_weight(&config, pair[0]);
            let (w2, _) = tilt_weight(&config, pair[1]);
            assert!(w2 > w1, "t={t}: weight not increasing at loss {}", pair[0]);
        }
    }
    for &t in &[-0.1, -0.2, -0.5] {
        let config = TiltConfig::new(t);
        for pair in grid.windows(2) {
            let (w1, _) = tilt_weight(&config, pair[0]);
            let (w2, _) = tilt_weight(&config, pair[1]);
            assert!(w2 < w1, "t={t}: weight not decreasing at loss {}", pair[0]);
        }
    }
    let zero = TiltConfig::new(0.0);
    for &loss in &grid {
        assert_eq!(tilt_weight(&zero, loss), (1.0, false));
    }
    println!("criterion 11 (tilt weight monotonicity): PASS over loss grid [0, 20]");
}
