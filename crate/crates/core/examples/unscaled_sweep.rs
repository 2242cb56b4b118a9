// Unscaled effect of conditioning: `N (E[Z^p, phi] - E[Z, phi])` tends to
// `-(pi^2/12) (1/2 Delta phi)(p)` like `1/N`.

use num_complex::Complex64;
use zerocond::densities::{unscaled_correction, unscaled_correction_multi, unscaled_target};
use zerocond::ensembles::EnsembleSpec;
use zerocond::experiments::{run, ExperimentConfig, ExperimentKind};
use zerocond::test_functions::TestFunction;

pub fn run_example() -> zerocond::Result<()> {
    let cfg = ExperimentConfig::defaults(ExperimentKind::UnscaledSweep);
    let res = run(&cfg)?;
    let table = res.table.as_ref().expect("sweep table");
    println!("{}", table.columns.join("  "));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|x| x.map_or("-".into(), |v| format!("{v:.6e}"))).collect();
        println!("{}", cells.join("  "));
    }
    for s in &res.scalars {
        println!("{:<28} {:.6e}", s.name, s.value);
    }

    // a bump centred away from p only feels its Gaussian tail
    let p = Complex64::new(0.0, 0.0);
    let phi = TestFunction::bump(Complex64::new(1.5, 0.0), 0.4);
    for n in [50, 200, 800] {
        let spec = EnsembleSpec::projective_line(n)?;
        let c = n as f64 * unscaled_correction(&spec, p, &phi)?;
        println!("N={n}: distant bump N*correction {c:.4e}, target {:.4e}", unscaled_target(&spec, p, &phi)?);
    }

    // two conditioned points far apart add up
    let spec = EnsembleSpec::projective_line(400)?;
    let phi = &cfg.test_function;
    let q = Complex64::new(2.0, 1.0);
    let both = unscaled_correction_multi(&spec, &[p, q], phi)?;
    let sum = unscaled_correction(&spec, p, phi)? + unscaled_correction(&spec, q, phi)?;
    println!("N=400 two points {both:.9e}, sum of singles {sum:.9e}");
    Ok(())
}

fn main() -> zerocond::Result<()> {
    run_example()
}
