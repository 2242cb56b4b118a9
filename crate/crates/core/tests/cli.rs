use std::path::Path;
use std::process::{Command, Output};

fn zerocond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerocond")).args(args).output().expect("spawn zerocond")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kernel_half_at_unit_distance() {
    let o = zerocond(&["kernel", "--model", "cp1", "--N", "2", "--z", "1,0", "--w", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p_n,lambda_n,pi_norm");
    let p: f64 = lines.next().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((p - 0.5).abs() < 1e-15);
}

#[test]
fn kernel_with_conditioning_adds_a_column() {
    let o = zerocond(&["kernel", "--N", "20", "--z", "0.1,0.1", "--w", "0.1,0.1", "--cond", "0,0", "--cond", "-0.2,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("p_n,lambda_n,pi_norm,conditional_diag_z"));
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row.len(), 4);
    assert!(row[3] > 0.0 && row[3] < row[2]);
}

#[test]
fn density_curve_near_origin() {
    let o = zerocond(&["density", "--kappa-cond", "--m", "1", "--r-grid", "0.1:0.3:0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!((rows[0][1] - 0.5017).abs() < 1e-4);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(zerocond(&["cond-density", "--bogus"]).status.code(), Some(64));
    assert_eq!(zerocond(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(zerocond(&["kernel", "--z", "1,2,3", "--w", "0"]).status.code(), Some(64));
    assert_eq!(zerocond(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = zerocond(&["cond-density", "--trials", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.join("manifest.json").exists());

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"experiment":"cond_density","no_such_key":1}"#).unwrap();
    let o = zerocond(&["cond-density", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn threshold_failure_exits_2_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    std::fs::write(&cfg, r#"{"experiment":"cond_density","degree":30,"trials":200,"z_threshold":1e-9}"#).unwrap();
    let out = dir.path().join("run");
    let o = zerocond(&["cond-density", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["passed"], false);
    for f in ["curve.csv", "summary.json", "plot.svg", "manifest.json"] {
        assert!(Path::new(&out).join(f).exists(), "{f}");
    }
}

#[test]
fn flags_override_config_and_print() {
    let o = zerocond(&["pair-corr", "--N", "64", "--trials", "12", "--seed", "3", "--model", "bf", "--p", "0.5,-0.5", "--print-config"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["experiment"], "pair_corr");
    assert_eq!(v["model"], "bargmann_fock");
    assert_eq!(v["degree"], 64);
    assert_eq!(v["trials"], 12);
    assert_eq!(v["master_seed"], 3);
    assert_eq!(v["base_point"], serde_json::json!([0.5, -0.5]));
}

#[test]
fn small_runs_of_every_experiment() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, extra) in [
        ("cond-density", vec!["--N", "40", "--trials", "300"]),
        ("pair-corr", vec!["--N", "40", "--trials", "300"]),
        ("unscaled-sweep", vec![]),
        ("variance-check", vec!["--N", "8", "--trials", "500"]),
        ("joint-density", vec!["--trials", "20000"]),
    ] {
        let out = dir.path().join(cmd);
        let mut args = vec![cmd, "--out", out.to_str().unwrap()];
        args.extend(extra);
        let o = zerocond(&args);
        assert!(matches!(o.status.code(), Some(0) | Some(2)), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(summary["passed"].as_bool(), Some(o.status.code() == Some(0)), "{cmd}");
        assert!(out.join("manifest.json").exists());
    }
}

#[test]
fn selftest_passes() {
    let o = zerocond(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10, "{text}");
    assert!(!text.contains("FAIL"));
}
