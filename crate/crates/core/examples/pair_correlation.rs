//! Unconditioned two-point function of the zeros at scaled distance r,
//! with the quadratic repulsion near 0 and saturation at 1.
//!
//! `cargo run --release --example pair_correlation -- 20000`

use zerocond::densities::{pair_correlation_finite_n, pair_correlation_limit};
use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};

fn main() -> zerocond::Result<()> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::PairCorr);
    cfg.trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5000);
    cfg.n_bins = 14;
    let spec = cfg.ensemble()?;
    let res = run(&cfg)?;

    let curve = res.curve.as_ref().expect("radial curve");
    println!("{:>6} {:>10} {:>10} {:>10} {:>9}", "r", "kappa", "limit", "finite N", "std_err");
    for i in 0..curve.n_bins() {
        let (lo, hi) = curve.bin(i);
        let r = 0.5 * (lo + hi);
        let v = curve.value[i].map_or("-".into(), |v| format!("{v:.4}"));
        let fin = pair_correlation_finite_n(&spec, r / spec.length_scale());
        println!("{r:>6.3} {v:>10} {:>10.4} {fin:>10.4} {:>9.4}", pair_correlation_limit(r), curve.std_err[i]);
    }
    for c in &res.checks {
        println!("{:<20} {:>5} {}", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
