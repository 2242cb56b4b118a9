use num_complex::Complex64;
use zerocond::experiments::{ExperimentConfig, ExperimentKind, ModelKind};
use zerocond::test_functions::TestFunction;

#[test]
fn defaults_round_trip_through_json() {
    for kind in ExperimentKind::ALL {
        let cfg = ExperimentConfig::defaults(kind);
        cfg.validate().unwrap();
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg, "{}", kind.name());
    }
}

#[test]
fn partial_config_fills_defaults() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment":"pair_corr","model":"bargmann_fock","degree":300,"base_point":[0.5,-1.0],
            "test_function":{"kind":"gaussian_bump","center":[1.0,0.0],"width":0.3,"amplitude":2.0}}"#,
    )
    .unwrap();
    let d = ExperimentConfig::defaults(ExperimentKind::PairCorr);
    assert_eq!(cfg.model, ModelKind::BargmannFock);
    assert_eq!(cfg.degree, 300);
    assert_eq!(cfg.base_point, Complex64::new(0.5, -1.0));
    assert_eq!(cfg.trials, d.trials);
    assert_eq!(cfg.far_tolerance, d.far_tolerance);
    assert_eq!(
        cfg.test_function,
        TestFunction::GaussianBump { center: Complex64::new(1.0, 0.0), width: 0.3, amplitude: 2.0 }
    );
}

#[test]
fn bad_configs_are_rejected() {
    assert!(ExperimentConfig::from_json(r#"{"experiment":"cond_density","trails":5}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"experiment":"nope"}"#).is_err());
    assert!(ExperimentConfig::from_json("[1,2]").is_err());
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::CondDensity);
    cfg.r_max = cfg.r_min;
    assert!(cfg.validate().is_err());
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::CondDensity);
    cfg.degree = 0;
    assert!(cfg.validate().is_err());
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::UnscaledSweep);
    cfg.n_sweep = vec![100];
    assert!(cfg.validate().is_err());
}
