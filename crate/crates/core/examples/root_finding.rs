//! Zeros of random sections: root count, chart swap, and equal-area
//! uniformity of the unconditioned zeros.

use zerocond::ensembles::{sample_section, EnsembleSpec, SectionSample};
use zerocond::numerics::trial_rng;
use zerocond::zeros::find_zeros;

fn main() -> zerocond::Result<()> {
    let n = 100;
    let spec = EnsembleSpec::projective_line(n)?;
    let s = sample_section(&spec, &mut trial_rng(5, 0));
    let zs = find_zeros(&s, &spec)?;
    println!("N={n}: {} affine roots, {} at infinity, max residual {:.2e}", zs.affine_roots.len(), zs.roots_at_infinity, zs.residual_max);

    // binomial weights are symmetric, so reversing coefficients inverts roots
    let rev = SectionSample {
        coeffs: s.coeffs.iter().rev().copied().collect(),
    };
    let inv = find_zeros(&rev, &spec)?;
    let worst = zs
        .affine_roots
        .iter()
        .map(|r| {
            let target = r.inv();
            inv.affine_roots.iter().map(|x| (x - target).norm() / (1.0 + target.norm())).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    println!("chart swap: worst mismatch {worst:.2e}");

    // ten bands of equal Fubini-Study area: |z|^2/(1+|z|^2) uniform
    let bins = 10;
    let trials = 2000;
    let mut counts = vec![0u64; bins];
    for t in 0..trials {
        let s = sample_section(&spec, &mut trial_rng(6, t));
        for r in find_zeros(&s, &spec)?.affine_roots {
            let q = r.norm_sqr() / (1.0 + r.norm_sqr());
            counts[((q * bins as f64) as usize).min(bins - 1)] += 1;
        }
    }
    let expected = (trials * n as u64) as f64 / bins as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    println!("band counts {counts:?}");
    println!("chi-square {chi2:.2} on {} degrees of freedom", bins - 1);
    Ok(())
}
