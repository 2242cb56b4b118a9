// Limiting densities around a conditioned zero in complex dimension m, and
// the finite-N conditional density approaching them.

use num_complex::Complex64;
use zerocond::densities::{conditional_density_finite_n, conditional_total_mass, kappa_cond, limit_density_kkm};
use zerocond::ensembles::EnsembleSpec;

pub fn run_example() -> zerocond::Result<()> {
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "r", "m=1", "m=2", "m=3", "m=4");
    for r in [0.1, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let row: Vec<String> = (1..=4).map(|m| format!("{:>10.4e}", kappa_cond(m, r))).collect();
        println!("{r:>5.2} {}", row.join(" "));
    }

    println!("\nK_km at r = 1");
    for m in 1..=3 {
        for k in 1..=m {
            println!("  m={m} k={k}: {:.6}", limit_density_kkm(m, k, 1.0)?);
        }
    }

    // scaled finite-N density at p = 0: z = tan(r / sqrt N)
    println!("\n{:>5} {:>10} {:>10} {:>10}", "r", "N=25", "N=400", "limit");
    let specs = [EnsembleSpec::projective_line(25)?, EnsembleSpec::projective_line(400)?];
    let p = Complex64::new(0.0, 0.0);
    for r in [0.3, 1.0, 2.0] {
        let vals: Vec<String> = specs
            .iter()
            .map(|s| {
                let z = Complex64::new((r / s.length_scale()).tan(), 0.0);
                let d = conditional_density_finite_n(s, p, z).unwrap();
                format!("{:>10.5}", d * std::f64::consts::PI / s.order() as f64)
            })
            .collect();
        println!("{r:>5.2} {} {:>10.5}", vals.join(" "), kappa_cond(1, r));
    }
    println!("\ntotal mass away from p at N=25: {:.12}", conditional_total_mass(&specs[0])?);
    Ok(())
}

fn main() -> zerocond::Result<()> {
    run_example()
}
