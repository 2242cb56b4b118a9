//! Variance of a smooth linear statistic of the zeros from the bipotential,
//! checked by Monte Carlo.
//!
//! `cargo run --release --example variance_bipotential -- 20000`

use num_complex::Complex64;
use zerocond::densities::{bipotential, variance_quadrature, YFunctions};
use zerocond::ensembles::EnsembleSpec;
use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};
use zerocond::test_functions::TestFunction;

fn main() -> zerocond::Result<()> {
    for l in [0.1, 0.5, 1.0, 2.0] {
        println!("Lambda={l}: F closed {:.12e}, by quadrature {:.12e}", YFunctions::f(l), YFunctions::f_by_quadrature(l)?);
    }
    let spec = EnsembleSpec::projective_line(50)?;
    let z = Complex64::new(0.1, 0.0);
    println!("Q_N(z,z) = {:.6} (1/24 = {:.6})", bipotential(&spec, z, z), 1.0 / 24.0);

    // N Var levels off once the bump is wide against 1/sqrt(N)
    let phi = TestFunction::bump(Complex64::new(0.0, 0.0), 0.5);
    for n in [10, 20, 40] {
        let v = variance_quadrature(&EnsembleSpec::projective_line(n)?, &phi)?;
        println!("N={n:>3}: Var = {v:.6e}, N Var = {:.6}", n as f64 * v);
    }

    let mut cfg = ExperimentConfig::defaults(ExperimentKind::VarianceCheck);
    cfg.trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5000);
    let res = run(&cfg)?;
    for s in &res.scalars {
        println!("{:<20} {:.6e} +- {:.1e}", s.name, s.value, s.std_err);
    }
    println!("passed: {}", res.passed);
    Ok(())
}
