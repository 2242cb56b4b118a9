use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};
use zerocond::output::{parse_curve_csv, write_outputs, RunManifest};

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(kind);
    cfg.degree = 30;
    cfg.trials = 400;
    cfg.n_bins = 20;
    cfg
}

#[test]
fn curve_csv_round_trips_exactly() {
    let res = run(&small(ExperimentKind::CondDensity)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&res, dir.path()).unwrap();
    let rows = parse_curve_csv(&std::fs::read_to_string(dir.path().join("curve.csv")).unwrap()).unwrap();
    let curve = res.curve.as_ref().unwrap();
    assert_eq!(rows.bin_edges, curve.bin_edges);
    assert_eq!(rows.value, curve.value);
    assert_eq!(rows.theory, *res.theory_curve.as_ref().unwrap());
    for (i, v) in curve.value.iter().enumerate() {
        match v {
            Some(_) => assert_eq!(rows.std_err[i], Some(curve.std_err[i])),
            None => assert_eq!(rows.std_err[i], None),
        }
    }
    assert_eq!(rows.z_score, *res.z_scores.as_ref().unwrap());
}

#[test]
fn empty_bins_are_blank_not_nan() {
    let mut cfg = small(ExperimentKind::PairCorr);
    cfg.trials = 5;
    cfg.r_min = 0.01;
    cfg.n_bins = 40;
    let res = run(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&res, dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(res.curve.as_ref().unwrap().value.iter().any(|v| v.is_none()));
    assert!(csv.lines().skip(1).any(|l| l.contains(",,")));
    for f in ["curve.csv", "summary.json", "plot.svg", "manifest.json"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap().to_lowercase();
        assert!(!text.contains("nan") && !text.contains("inf,") && !text.contains("infinity"), "{f}");
    }
}

#[test]
fn manifest_lists_files_and_holds_runtime() {
    for kind in [ExperimentKind::CondDensity, ExperimentKind::UnscaledSweep] {
        let mut cfg = small(kind);
        if kind == ExperimentKind::UnscaledSweep {
            cfg = ExperimentConfig::defaults(kind);
        }
        let res = run(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m = write_outputs(&res, dir.path()).unwrap();
        let on_disk: RunManifest = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(on_disk.files, m.files);
        assert!(!m.files.iter().any(|f| f == "manifest.json"));
        for f in &m.files {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        let table = kind == ExperimentKind::UnscaledSweep;
        assert_eq!(m.files.iter().any(|f| f == "table.csv"), table);
        assert_eq!(m.files.iter().any(|f| f == "curve.csv"), !table);
        assert!(on_disk.runtime_seconds >= 0.0);
        assert!(on_disk.finished_unix >= on_disk.started_unix);
        let summary = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        assert!(!summary.contains("runtime"));
        let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn summary_records_config_and_checks() {
    let res = run(&small(ExperimentKind::CondDensity)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&res, dir.path()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(v["experiment"], "cond_density");
    assert_eq!(v["config"]["degree"], 30);
    assert_eq!(v["passed"].as_bool(), Some(res.passed));
    assert!(v["checks"].as_array().unwrap().len() >= 5);
    let back = ExperimentConfig::from_value(v["config"].clone(), None).unwrap();
    assert_eq!(back, res.config);
}
