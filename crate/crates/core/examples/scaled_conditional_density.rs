//! Density of zeros near a conditioned zero in scaled coordinates, compared
//! with the limiting radial profile.
//!
//! `cargo run --release --example scaled_conditional_density -- 20000`

use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};

fn main() -> zerocond::Result<()> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::CondDensity);
    cfg.trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5000);
    cfg.n_bins = 14;
    let res = run(&cfg)?;

    let curve = res.curve.as_ref().expect("radial curve");
    let theory = res.theory_curve.as_ref().expect("theory");
    println!("N={} trials={}", cfg.degree, cfg.trials);
    println!("{:>6} {:>10} {:>10} {:>9}", "r", "density", "limit", "std_err");
    for i in 0..curve.n_bins() {
        let (lo, hi) = curve.bin(i);
        let v = curve.value[i].map_or("-".into(), |v| format!("{v:.4}"));
        println!("{:>6.3} {v:>10} {:>10.4} {:>9.4}", 0.5 * (lo + hi), theory[i], curve.std_err[i]);
    }
    for c in &res.checks {
        println!("{:<26} {:>5} {}", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
