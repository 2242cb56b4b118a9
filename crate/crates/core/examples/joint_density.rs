//! Joint density of all zeros for small N, against empirical frequencies of
//! zeros landing in small discs around two configurations.

use num_complex::Complex64;
use zerocond::densities::joint::inner_integral_quadrature;
use zerocond::densities::joint_zero_density_unnormalized;
use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};

fn main() -> zerocond::Result<()> {
    let c = Complex64::new;
    let zs = [c(0.2, 0.3), c(-1.1, 0.4), c(2.0, 2.0)];
    println!("density {:.6e}", joint_zero_density_unnormalized(&zs)?);
    println!(
        "inner integral exact {:.12e}, quadrature {:.12e}",
        zerocond::densities::joint::inner_integral(&zs)?,
        inner_integral_quadrature(&zs)?
    );

    for (n, trials) in [(1u32, 200_000u64), (2, 200_000)] {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::JointDensitySmallN);
        cfg.degree = n;
        cfg.trials = trials;
        let res = run(&cfg)?;
        println!("\nN={n}, {trials} trials");
        for s in &res.scalars {
            println!("  {:<24} {:.4}", s.name, s.value);
        }
        for ch in &res.checks {
            println!("  {:<24} {}", ch.name, if ch.passed { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}
