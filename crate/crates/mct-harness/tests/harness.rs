//! Library-level checks of suite dispatch, reports and reproducibility.

use mct_harness::{run_suite, ExperimentConfig, HarnessError, SUITE_NAMES};

#[test]
fn unknown_suite_is_rejected() {
    match run_suite(&ExperimentConfig::new("nope")) {
        Err(HarnessError::UnknownSuite { name, .. }) => assert_eq!(name, "nope"),
        other => panic!("expected UnknownSuite, got {other:?}"),
    }
}

#[test]
fn every_named_suite_is_dispatched() {
    for required in ["discretization", "embeddings", "hardy", "dsk", "cstar", "thm-main", "cor-lorentz", "weighted", "gamma", "sharpness", "gm", "pitt-homogeneity", "pitt-necessity", "campanato", "lipschitz", "appendix-a1", "appendix-a2"] {
        assert!(SUITE_NAMES.contains(&required), "{required} missing");
    }
}

#[test]
fn same_seed_same_report() {
    let cfg = ExperimentConfig::new("dsk").with_seed(42).with_count(30);
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    let c = run_suite(&cfg.clone().with_seed(43)).unwrap();
    assert_ne!(a.to_csv().unwrap(), c.to_csv().unwrap());
}

#[test]
fn config_round_trips_through_json() {
    let cfg = ExperimentConfig::new("hardy").with_seed(7).with_count(12).with_sweep(vec![1.0, 2.0]).with_tolerance("c_max", 64.0);
    let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
    assert_eq!(cfg, back);
}

#[test]
fn suites_reject_unsupported_dimension() {
    let mut cfg = ExperimentConfig::new("sharpness");
    cfg.space.dim = Some(2);
    assert!(matches!(run_suite(&cfg), Err(HarnessError::Config(_))));
}

#[test]
fn report_summary_matches_rows() {
    let r = run_suite(&ExperimentConfig::new("hardy").with_seed(5).with_count(20)).unwrap();
    assert_eq!(r.summary.cases, r.rows.len());
    let max = r.rows.iter().map(|row| row.ratio).fold(0.0, f64::max);
    assert_eq!(r.summary.max_ratio, Some(max));
    let json: serde_json::Value = serde_json::from_str(&r.summary_json().unwrap()).unwrap();
    assert_eq!(json["cases"], r.rows.len());
}

mod properties {
    use mct_harness::{fit_slope, parse_weight};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn fit_recovers_exact_power_laws(slope in -3.0f64..3.0, scale in 0.01f64..100.0, start in 1.0f64..10.0) {
            let pts: Vec<(f64, f64)> = (0..6).map(|i| {
                let x = start * 2f64.powi(i);
                (x, scale * x.powf(slope))
            }).collect();
            let fit = fit_slope(&pts).unwrap();
            prop_assert!((fit.slope - slope).abs() < 1e-9);
            prop_assert!(fit.stderr < 1e-9);
        }

        #[test]
        fn power_spec_evaluates_as_power(e in -2.0f64..2.0, k in -20i32..20) {
            let w = parse_weight(&format!("pow:{e}")).unwrap();
            let r = 2f64.powi(k);
            prop_assert!((w.eval(r) / r.powf(e) - 1.0).abs() < 1e-12);
            prop_assert_eq!(w.power_exponent(), Some(e));
        }
    }
}
