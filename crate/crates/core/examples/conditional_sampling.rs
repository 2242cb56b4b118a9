// Gaussian sections conditioned to vanish at two points, checked against
// the downdated kernel.

use num_complex::Complex64;
use zerocond::ensembles::{basis_eval, weighted_value, ConditionSpec, Conditioner, EnsembleSpec};
use zerocond::kernels::{conditional_kernel_diag, diagonal, kernel_eval, CoherentFrame};
use zerocond::numerics::trial_rng;
use zerocond::zeros::find_zeros;

pub fn run_example() -> zerocond::Result<()> {
    let spec = EnsembleSpec::projective_line(50)?;
    let pts = [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.2)];
    let cd = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&pts)?)?;
    println!("Gram condition number: {:.3}", cd.condition_number());

    let mut rng = trial_rng(2024, 0);
    let s = cd.sample(&spec, &mut rng);
    for &p in &pts {
        let b = basis_eval(&spec, p)?;
        println!("|s(p)| h(p) at {p}: {:.2e}", weighted_value(&s, &b).norm());
    }
    let zs = find_zeros(&s, &spec)?;
    for &p in &pts {
        let d = zs.affine_roots.iter().map(|r| (r - p).norm()).fold(f64::INFINITY, f64::min);
        println!("nearest root to {p}: {d:.2e}");
    }

    // one point: |Pi^p(z,z)| = |Pi(z,z)| (1 - P_N(z,p)^2)
    let z = Complex64::new(0.1, -0.05);
    let one = conditional_kernel_diag(&spec, &pts[..1], z)?;
    let p2 = kernel_eval(&spec, z, pts[0]).p_n.powi(2);
    println!("\none point: {one:.12e} vs {:.12e}", diagonal(&spec) * (1.0 - p2));

    let frame = CoherentFrame::new(&spec, &pts)?;
    println!("two points: |Pi^(p1,p2)(z,z)| = {:.12e}", frame.conditional_diag(&spec, z));
    println!("Gram perturbation norm: {:.3e}", frame.perturbation_norm());
    Ok(())
}

fn main() -> zerocond::Result<()> {
    run_example()
}
