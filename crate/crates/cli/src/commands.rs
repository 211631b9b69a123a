//! The three subcommands and their file outputs.

use tiltstream_core::presets::{
    classification_comparison, classification_run, regression_comparison, regression_run,
};
use tiltstream_core::{
    euclidean_distance, materialize_stream, run_experiment, ExperimentConfig, ExperimentResult,
    ParamVector, Sample, StreamConfig, Task,
};

use crate::error::{run_error, CliError};
use crate::output::{
    csv_document, fmt_f64, run_label, to_json, ManifestHeader, OutputDir, RunSummary, Summary,
};
use crate::settings::{resolve, RunArgs, SweepArgs};
use crate::svg::{render_plot, PlotSpec, Series};

/// How many trailing stream samples the fit/boundary scatter shows.
const SCATTER_WINDOW: usize = 200;

fn execute(configs: &[ExperimentConfig]) -> Result<Vec<ExperimentResult>, CliError> {
    configs
        .iter()
        .map(|config| run_experiment(config).map_err(|e| run_error(&run_label(config), e)))
        .collect()
}

fn split_scatter(samples: &[Sample], as_point: impl Fn(&Sample) -> (f64, f64)) -> (Series, Series) {
    let inliers = samples
        .iter()
        .filter(|s| !s.is_outlier)
        .map(&as_point)
        .collect();
    let outliers = samples
        .iter()
        .filter(|s| s.is_outlier)
        .map(&as_point)
        .collect();
    (
        Series::scatter("inliers", inliers),
        Series::scatter("outliers", outliers),
    )
}

fn regression_theta_star(config: &ExperimentConfig) -> ParamVector {
    let StreamConfig::Regression(stream) = &config.stream else {
        unreachable!("regression commands build regression streams");
    };
    ParamVector::new(vec![stream.inlier_slope, stream.inlier_intercept])
        .expect("stream config is validated")
}

pub fn cmd_regress(args: &RunArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let settings = resolve(&args.shared, args.preset.as_deref(), args.tilt, None)?;
    let comparison = settings.comparison();
    let configs = match settings.preset {
        Some(sign) => regression_comparison(sign, &comparison),
        None => vec![regression_run(
            settings.optimizer,
            settings.tilt.unwrap_or(0.0),
            settings.learning_rate(Task::Regression),
            &comparison,
        )],
    };
    let results = execute(&configs)?;
    let mut out = OutputDir::create(&settings.out_dir)?;

    // error_trace.csv: optimizer, tilt, iteration, distance.
    let mut rows = Vec::new();
    for result in &results {
        let trace = result.error_trace.as_deref().unwrap_or(&[]);
        for point in trace {
            rows.push(vec![
                result.config.optimizer.name().to_string(),
                fmt_f64(result.config.tilt.t),
                point.iteration.to_string(),
                fmt_f64(point.distance),
            ]);
        }
    }
    out.write(
        "error_trace.csv",
        &csv_document("optimizer,tilt,iteration,distance", rows),
    )?;

    let summary = Summary {
        task: Task::Regression.name(),
        iterations: settings.iterations,
        stream_seed: settings.seed,
        eval_seed: settings.eval_seed,
        prng: tiltstream_core::PRNG_ALGORITHM,
        runs: results
            .iter()
            .map(|result| {
                let theta_star = regression_theta_star(&result.config);
                RunSummary {
                    optimizer: result.config.optimizer.name(),
                    tilt: result.config.tilt.t,
                    learning_rate: result.config.learning_rate,
                    final_theta: result.final_theta.as_slice().to_vec(),
                    final_error: Some(
                        euclidean_distance(&result.final_theta, &theta_star)
                            .expect("dimensions match"),
                    ),
                    auc: None,
                    confusion: None,
                    clamp_events: result.clamp_events,
                }
            })
            .collect(),
    };
    out.write("summary.json", &to_json(&summary)?)?;

    // fit_lines.svg: trailing window of the training stream plus each
    // run's fitted line across the x range.
    let stream_samples = materialize_stream(&configs[0].stream, settings.iterations);
    let window_start = stream_samples.len().saturating_sub(SCATTER_WINDOW);
    let (inliers, outliers) = split_scatter(&stream_samples[window_start..], |s| {
        (s.features[0], s.target)
    });
    let StreamConfig::Regression(stream) = &configs[0].stream else {
        unreachable!();
    };
    let (xa, xb) = stream.x_range;
    let mut series = vec![inliers, outliers];
    for result in &results {
        let theta = &result.final_theta;
        series.push(Series::line(
            run_label(&result.config),
            vec![
                (xa, theta[0] * xa + theta[1]),
                (xb, theta[0] * xb + theta[1]),
            ],
        ));
    }
    out.write(
        "fit_lines.svg",
        &render_plot(&PlotSpec {
            title: "fitted lines on the trailing stream window".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series,
        })?,
    )?;

    // error_trace.svg: distance to the inlier parameters over iterations.
    let series = results
        .iter()
        .map(|result| {
            let points = result
                .error_trace
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|p| (p.iteration as f64, p.distance))
                .collect();
            Series::line(run_label(&result.config), points)
        })
        .collect();
    out.write(
        "error_trace.svg",
        &render_plot(&PlotSpec {
            title: "parameter error over the stream".into(),
            x_label: "iteration".into(),
            y_label: "distance to inlier parameters".into(),
            series,
        })?,
    )?;

    out.finish(ManifestHeader {
        command_line,
        configs,
    })
}

pub fn cmd_classify(args: &RunArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let settings = resolve(&args.shared, args.preset.as_deref(), args.tilt, None)?;
    let comparison = settings.comparison();
    let configs = match settings.preset {
        Some(sign) => classification_comparison(sign, &comparison),
        None => vec![classification_run(
            settings.optimizer,
            settings.tilt.unwrap_or(0.0),
            settings.learning_rate(Task::Classification),
            &comparison,
        )],
    };
    let results = execute(&configs)?;
    let mut out = OutputDir::create(&settings.out_dir)?;

    // roc.csv: optimizer, tilt, fpr, tpr.
    let mut rows = Vec::new();
    for result in &results {
        let roc = result.roc.as_ref().expect("classification runs fill roc");
        for point in &roc.points {
            rows.push(vec![
                result.config.optimizer.name().to_string(),
                fmt_f64(result.config.tilt.t),
                fmt_f64(point.false_positive_rate),
                fmt_f64(point.true_positive_rate),
            ]);
        }
    }
    out.write("roc.csv", &csv_document("optimizer,tilt,fpr,tpr", rows))?;

    // confusion.csv: optimizer, tilt, tp, fp, tn, fn.
    let rows = results
        .iter()
        .map(|result| {
            let cm = result
                .confusion
                .expect("classification runs fill confusion");
            vec![
                result.config.optimizer.name().to_string(),
                fmt_f64(result.config.tilt.t),
                cm.true_positives.to_string(),
                cm.false_positives.to_string(),
                cm.true_negatives.to_string(),
                cm.false_negatives.to_string(),
            ]
        })
        .collect::<Vec<_>>();
    out.write(
        "confusion.csv",
        &csv_document("optimizer,tilt,tp,fp,tn,fn", rows),
    )?;

    let summary = Summary {
        task: Task::Classification.name(),
        iterations: settings.iterations,
        stream_seed: settings.seed,
        eval_seed: settings.eval_seed,
        prng: tiltstream_core::PRNG_ALGORITHM,
        runs: results
            .iter()
            .map(|result| RunSummary {
                optimizer: result.config.optimizer.name(),
                tilt: result.config.tilt.t,
                learning_rate: result.config.learning_rate,
                final_theta: result.final_theta.as_slice().to_vec(),
                final_error: None,
                auc: result.roc.as_ref().map(|r| r.auc),
                confusion: result.confusion,
                clamp_events: result.clamp_events,
            })
            .collect(),
    };
    out.write("summary.json", &to_json(&summary)?)?;

    // boundary.svg: held-out scatter plus each run's zero-score line.
    let eval_stream = configs[0].stream.reseeded(settings.eval_seed);
    let eval_samples = materialize_stream(&eval_stream, settings.eval_size);
    let shown = &eval_samples[..eval_samples.len().min(SCATTER_WINDOW * 2)];
    let (inliers, outliers) = split_scatter(shown, |s| (s.features[0], s.features[1]));
    let bounds = scatter_bounds(shown);
    let mut series = vec![inliers, outliers];
    for result in &results {
        if let Some(points) = zero_score_segment(&result.final_theta, bounds) {
            series.push(Series::line(run_label(&result.config), points));
        }
    }
    out.write(
        "boundary.svg",
        &render_plot(&PlotSpec {
            title: "zero-score boundaries on the held-out set".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series,
        })?,
    )?;

    // roc.svg: one curve per run plus the chance diagonal.
    let mut series = vec![Series::line("chance", vec![(0.0, 0.0), (1.0, 1.0)])];
    for result in &results {
        let roc = result.roc.as_ref().expect("classification runs fill roc");
        series.push(Series::line(
            run_label(&result.config),
            roc.points
                .iter()
                .map(|p| (p.false_positive_rate, p.true_positive_rate))
                .collect(),
        ));
    }
    out.write(
        "roc.svg",
        &render_plot(&PlotSpec {
            title: "ROC on the held-out set".into(),
            x_label: "false positive rate".into(),
            y_label: "true positive rate".into(),
            series,
        })?,
    )?;

    out.finish(ManifestHeader {
        command_line,
        configs,
    })
}

pub fn cmd_sweep(args: &SweepArgs, command_line: Vec<String>) -> Result<(), CliError> {
    let settings = resolve(&args.shared, None, None, args.tilt_grid.as_deref())?;
    let grid = settings
        .tilt_grid
        .clone()
        .ok_or_else(|| CliError::Usage("sweep requires --tilt-grid".into()))?;
    let task: Task = args.task.into();
    let comparison = settings.comparison();
    let lr = settings.learning_rate(task);
    let configs: Vec<ExperimentConfig> = grid
        .iter()
        .map(|&tilt| match task {
            Task::Regression => regression_run(settings.optimizer, tilt, lr, &comparison),
            Task::Classification => classification_run(settings.optimizer, tilt, lr, &comparison),
        })
        .collect();
    let results = execute(&configs)?;
    let mut out = OutputDir::create(&settings.out_dir)?;

    let (header, metric_name): (&str, &str) = match task {
        Task::Regression => ("tilt,final_error", "final_error"),
        Task::Classification => ("tilt,auc,tp,fp,tn,fn", "auc"),
    };
    let mut rows = Vec::new();
    let mut curve = Vec::new();
    for result in &results {
        let tilt = result.config.tilt.t;
        match task {
            Task::Regression => {
                let theta_star = regression_theta_star(&result.config);
                let error =
                    euclidean_distance(&result.final_theta, &theta_star).expect("dimensions match");
                rows.push(vec![fmt_f64(tilt), fmt_f64(error)]);
                curve.push((tilt, error));
            }
            Task::Classification => {
                let auc = result.roc.as_ref().expect("classification fills roc").auc;
                let cm = result.confusion.expect("classification fills confusion");
                rows.push(vec![
                    fmt_f64(tilt),
                    fmt_f64(auc),
                    cm.true_positives.to_string(),
                    cm.false_positives.to_string(),
                    cm.true_negatives.to_string(),
                    cm.false_negatives.to_string(),
                ]);
                curve.push((tilt, auc));
            }
        }
    }
    out.write("sweep.csv", &csv_document(header, rows))?;

    out.write(
        "sweep.svg",
        &render_plot(&PlotSpec {
            title: format!("tilt sweep ({})", task.name()),
            x_label: "tilt".into(),
            y_label: metric_name.into(),
            series: vec![Series::line(metric_name, curve)],
        })?,
    )?;

    out.finish(ManifestHeader {
        command_line,
        configs,
    })
}

type Bounds = ((f64, f64), (f64, f64));

fn scatter_bounds(samples: &[Sample]) -> Bounds {
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        xs = (xs.0.min(s.features[0]), xs.1.max(s.features[0]));
        ys = (ys.0.min(s.features[1]), ys.1.max(s.features[1]));
    }
    if xs.0 > xs.1 {
        xs = (-5.0, 5.0);
        ys = (-5.0, 5.0);
    }
    (xs, ys)
}

/// Clips the line `w_x * x + w_y * y + b = 0` to the scatter's bounding box.
/// Returns None when the boundary misses the box entirely (or theta is
/// degenerate in both feature weights).
fn zero_score_segment(theta: &ParamVector, (xs, ys): Bounds) -> Option<Vec<(f64, f64)>> {
    let (wx, wy, b) = (theta[0], theta[1], theta[2]);
    let mut hits: Vec<(f64, f64)> = Vec::new();
    let mut push = |p: (f64, f64)| {
        if !hits
            .iter()
            .any(|q| (q.0 - p.0).abs() < 1e-9 && (q.1 - p.1).abs() < 1e-9)
        {
            hits.push(p);
        }
    };
    if wy.abs() > 1e-12 {
        for x in [xs.0, xs.1] {
            let y = -(wx * x + b) / wy;
            if y >= ys.0 && y <= ys.1 {
                push((x, y));
            }
        }
    }
    if wx.abs() > 1e-12 {
        for y in [ys.0, ys.1] {
            let x = -(wy * y + b) / wx;
            if x >= xs.0 && x <= xs.1 {
                push((x, y));
            }
        }
    }
    if hits.len() < 2 {
        return None;
    }
    hits.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    Some(vec![hits[0], *hits.last().unwrap()])
}
