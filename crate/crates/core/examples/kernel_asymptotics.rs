// Normalised Szego kernel on the projective line: closed form, the
// near-diagonal residual and its decay in N, and the far off-diagonal bound.

use num_complex::Complex64;
use zerocond::ensembles::EnsembleSpec;
use zerocond::kernels::{far_offdiagonal_check, kernel_direct, kernel_eval, near_diagonal_residual};

pub fn run_example() -> zerocond::Result<()> {
    let c = Complex64::new;

    let spec = EnsembleSpec::projective_line(2)?;
    let k = kernel_eval(&spec, c(1.0, 0.0), c(0.0, 0.0));
    println!("N=2, z=1, w=0: P = {:.6}, Lambda = {:.6}", k.p_n, k.lambda_n);

    let spec = EnsembleSpec::projective_line(60)?;
    let (z, w) = (c(0.3, -0.2), c(0.25, 0.05));
    let closed = kernel_eval(&spec, z, w).pi_norm;
    let summed = kernel_direct(&spec, z, w)?.norm();
    println!("N=60 |Pi(z,w)|: closed form {closed:.15e}, basis sum {summed:.15e}");

    // |R_N(u,0)| at u = 1 and a fit of C N^-a
    println!("\n{:>6} {:>14}", "N", "|R_N(1,0)|");
    let (mut xs, mut ys) = (vec![], vec![]);
    for n in [100, 200, 400, 800, 1600] {
        let spec = EnsembleSpec::projective_line(n)?;
        let r = near_diagonal_residual(&spec, c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).abs();
        println!("{n:>6} {r:>14.6e}");
        xs.push((n as f64).ln());
        ys.push(r.ln());
    }
    let (slope, icpt) = zerocond::experiments::fit_line(&xs, &ys);
    println!("fit: |R_N| ~ {:.4} N^{:.3}", icpt.exp(), slope);

    let spec = EnsembleSpec::projective_line(400)?;
    let bound = far_offdiagonal_check(&spec, c(0.0, 0.0), c(0.5, 0.0), 3.0)?;
    println!("\nN=400, far pair: P = {bound:.3e}");
    Ok(())
}

fn main() -> zerocond::Result<()> {
    run_example()
}
