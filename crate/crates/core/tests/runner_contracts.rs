//! Runner-level contracts: bitwise determinism, the exact equivalence of
//! zero tilt with an untilted training loop, stream replay, and divergence
//! detection.

use tiltstream_core::presets::{regression_run, ComparisonSettings};
use tiltstream_core::{
    euclidean_distance, init_theta, loss_eval, materialize_stream, run_comparison, run_experiment,
    Error, ExperimentConfig, OptimizerConfig, ParamVector, RegressionStreamConfig, Task,
    TiltConfig,
};

fn sgd_regression(tilt: f64, learning_rate: f64, seed: u64) -> ExperimentConfig {
    regression_run(
        OptimizerConfig::Sgd,
        tilt,
        learning_rate,
        &ComparisonSettings::with_seed(seed),
    )
}

#[test]
fn identical_configs_give_bit_identical_results() {
    for optimizer in [
        OptimizerConfig::Sgd,
        OptimizerConfig::momentum_default(),
        OptimizerConfig::adam_default(),
    ] {
        let config = regression_run(optimizer, -0.5, 1e-2, &ComparisonSettings::with_seed(99));
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a, b);
    }
}

/// Zero tilt must reproduce, step for step, a loop that never touches the
/// tilt machinery at all.
#[test]
fn zero_tilt_equals_untilted_loop_bit_for_bit() {
    for optimizer in [
        OptimizerConfig::Sgd,
        OptimizerConfig::momentum_default(),
        OptimizerConfig::adam_default(),
    ] {
        let config = regression_run(optimizer, 0.0, 1e-2, &ComparisonSettings::with_seed(123));
        let result = run_experiment(&config).unwrap();

        // Untilted oracle loop: raw gradients straight into the optimizer.
        let samples = materialize_stream(&config.stream, config.iterations);
        let mut theta = init_theta(config.task.dimension(), config.init_seed);
        let mut opt = config.optimizer.build(config.learning_rate, 2);
        let theta_star = ParamVector::new(vec![0.52, -2.0]).unwrap();
        let mut distances = Vec::new();
        for (i, sample) in samples.iter().enumerate() {
            let eval = loss_eval(Task::Regression, &theta, sample).unwrap();
            theta = opt.step(&theta, &eval.gradient).unwrap();
            if (i + 1) % config.trace_stride == 0 {
                distances.push(euclidean_distance(&theta, &theta_star).unwrap());
            }
        }

        assert_eq!(result.final_theta, theta, "{}", config.optimizer.name());
        let trace = result.error_trace.unwrap();
        assert_eq!(trace.len(), distances.len());
        for (point, expected) in trace.iter().zip(&distances) {
            assert_eq!(point.distance, *expected);
        }
    }
}

/// Replaying a stream config twice yields bitwise-identical samples, which
/// is what lets comparison members consume "the same" stream.
#[test]
fn stream_replay_is_bit_exact() {
    let config = RegressionStreamConfig::with_seed(7).into();
    let hash = |samples: &[tiltstream_core::Sample]| {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let mut h = DefaultHasher::new();
        for s in samples {
            for f in &s.features {
                f.to_bits().hash(&mut h);
            }
            s.target.to_bits().hash(&mut h);
            s.is_outlier.hash(&mut h);
        }
        h.finish()
    };
    let a = materialize_stream(&config, 4000);
    let b = materialize_stream(&config, 4000);
    assert_eq!(hash(&a), hash(&b));
    assert_eq!(a, b);
}

#[test]
fn comparison_results_match_private_replays() {
    let configs = vec![
        sgd_regression(0.0, 1e-2, 5),
        sgd_regression(-0.5, 1e-2, 5),
        sgd_regression(-0.2, 1e-2, 5),
    ];
    let shared = run_comparison(&configs).unwrap();
    for (config, from_comparison) in configs.iter().zip(&shared) {
        assert_eq!(&run_experiment(config).unwrap(), from_comparison);
    }
}

#[test]
fn comparison_rejects_mixed_tasks() {
    let regression = sgd_regression(0.0, 1e-2, 5);
    let classification = tiltstream_core::presets::classification_run(
        OptimizerConfig::Sgd,
        0.0,
        1e-3,
        &ComparisonSettings::with_seed(5),
    );
    assert_eq!(
        run_comparison(&[regression, classification]),
        Err(Error::ComparisonMismatch("task"))
    );
}

#[test]
fn divergence_error_names_an_iteration() {
    let mut config = sgd_regression(0.5, 1e-1, 3);
    config.iterations = 2000;
    let err = run_experiment(&config).unwrap_err();
    match err {
        Error::Diverged { iteration } => {
            assert!((1..=2000).contains(&iteration));
            assert!(err.to_string().contains(&iteration.to_string()));
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn invalid_configs_are_rejected_before_running() {
    let mut config = sgd_regression(0.0, 1e-2, 1);
    config.learning_rate = -1.0;
    assert!(matches!(
        run_experiment(&config),
        Err(Error::InvalidConfig(_))
    ));

    let mut config = sgd_regression(0.0, 1e-2, 1);
    config.trace_stride = 0;
    assert!(matches!(
        run_experiment(&config),
        Err(Error::InvalidConfig(_))
    ));

    let mut config = sgd_regression(0.0, 1e-2, 1);
    config.task = Task::Classification;
    assert!(matches!(
        run_experiment(&config),
        Err(Error::InvalidConfig(_))
    ));

    let mut config = tiltstream_core::presets::classification_run(
        OptimizerConfig::Sgd,
        0.0,
        1e-3,
        &ComparisonSettings::with_seed(1),
    );
    config.eval_size = 1;
    assert!(matches!(
        run_experiment(&config),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn config_round_trips_through_json() {
    let config = sgd_regression(-0.5, 1e-2, 17);
    let json = serde_json::to_string_pretty(&config).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(config, back);

    let classification = tiltstream_core::presets::classification_run(
        OptimizerConfig::adam_default(),
        0.2,
        8e-4,
        &ComparisonSettings::with_seed(17),
    );
    let json = serde_json::to_string(&classification).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(classification, back);
}

/// The tilt cap must be observable: a tiny cap on a hot stream fires and is
/// counted, while the default cap stays silent on the reference runs.
#[test]
fn clamp_events_are_counted() {
    let mut config = sgd_regression(0.5, 1e-6, 9);
    config.tilt = TiltConfig {
        t: 0.5,
        exponent_cap: 1e-3,
        cap_enabled: true,
    };
    config.iterations = 200;
    let result = run_experiment(&config).unwrap();
    assert!(result.clamp_events > 0);

    // A negative tilt keeps the exponent below any cap, engaged or not.
    let mut config = sgd_regression(-0.5, 1e-2, 9);
    config.tilt = TiltConfig {
        t: -0.5,
        exponent_cap: 1e-3,
        cap_enabled: false,
    };
    config.iterations = 200;
    let result = run_experiment(&config).unwrap();
    assert_eq!(result.clamp_events, 0);
}
