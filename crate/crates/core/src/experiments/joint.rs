//! Joint zero density at small `N`: ratios at fixed configurations against
//! counts of sampled root tuples in small Fubini-Study discs.

use num_complex::Complex64;
use rand::seq::SliceRandom;

use super::config::{ExperimentConfig, ExperimentKind};
use super::result::{Check, ExperimentResult};
use super::run_chunked;
use crate::densities::joint_zero_density_unnormalized;
use crate::ensembles::sample_section;
use crate::error::{Error, Result};
use crate::kernels::fs_distance;
use crate::numerics::trial_rng;
use crate::zeros::find_zeros;

/// A named pair of configurations whose density ratio is estimated.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub name: &'static str,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

/// Configurations compared for degree `n`.
pub fn comparisons(n: usize) -> Vec<Comparison> {
    let c = Complex64::new;
    if n == 1 {
        return vec![Comparison {
            name: "origin_vs_one",
            a: vec![c(0.0, 0.0)],
            b: vec![c(1.0, 0.0)],
        }];
    }
    let base: Vec<Complex64> = [c(0.5, 0.2), c(-0.4, 0.0), c(0.3, -0.6), c(-0.2, 0.7)][..n].to_vec();
    let mut swapped = base.clone();
    swapped.swap(0, 1);
    let rot = Complex64::from_polar(1.0, 1.0);
    vec![
        Comparison {
            name: "swap",
            a: base.clone(),
            b: swapped,
        },
        Comparison {
            name: "rotation",
            a: base.clone(),
            b: base.iter().map(|z| z * rot).collect(),
        },
    ]
}

pub fn run_joint_density_small_n(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.experiment != ExperimentKind::JointDensitySmallN {
        return Err(Error::Config("run_joint_density_small_n needs experiment = joint_density_small_n".into()));
    }
    let spec = cfg.ensemble()?;
    let n = spec.order() as usize;
    let cmps = comparisons(n);
    let eps = cfg.joint_radius;
    let inside = |roots: &[Complex64], conf: &[Complex64]| roots.iter().zip(conf).all(|(r, c)| fs_distance(*r, *c) < eps);

    // [a, b] counts per comparison, then trials with a root at infinity
    let parts = run_chunked(
        cfg.trials,
        cfg.chunk_size,
        || (vec![[0u64; 2]; cmps.len()], 0u64),
        |acc, t| {
            let mut rng = trial_rng(cfg.master_seed, t);
            let s = sample_section(&spec, &mut rng);
            let mut roots = find_zeros(&s, &spec)?.affine_roots;
            if roots.len() < n {
                acc.1 += 1;
                return Ok(());
            }
            // uniformly random labels make the root tuple exchangeable
            roots.shuffle(&mut rng);
            for (k, cmp) in cmps.iter().enumerate() {
                acc.0[k][0] += inside(&roots, &cmp.a) as u64;
                acc.0[k][1] += inside(&roots, &cmp.b) as u64;
            }
            Ok(())
        },
    )?;
    let mut counts = vec![[0u64; 2]; cmps.len()];
    let mut skipped = 0;
    for (c, s) in &parts {
        for (tot, x) in counts.iter_mut().zip(c) {
            tot[0] += x[0];
            tot[1] += x[1];
        }
        skipped += s;
    }

    let mut res = ExperimentResult::new(cfg.clone());
    let mut max_z: f64 = 0.0;
    let jac = |conf: &[Complex64]| conf.iter().map(|z| (1.0 + z.norm_sqr()).powi(2)).product::<f64>();
    for (cmp, &[ca, cb]) in cmps.iter().zip(&counts) {
        let theory = joint_zero_density_unnormalized(&cmp.a)? / joint_zero_density_unnormalized(&cmp.b)?;
        res.push_scalar(&format!("{}_count_a", cmp.name), ca as f64, 0.0);
        res.push_scalar(&format!("{}_count_b", cmp.name), cb as f64, 0.0);
        res.push_scalar(&format!("{}_theory", cmp.name), theory, 0.0);
        if ca == 0 || cb == 0 {
            res.checks.push(Check::flag(cmp.name, false, 0.0, "a configuration bin received no samples"));
            continue;
        }
        // equal-area Fubini-Study bins; convert to Lebesgue density at the centres
        let emp = ca as f64 / cb as f64 * jac(&cmp.b) / jac(&cmp.a);
        let se = emp * (1.0 / ca as f64 + 1.0 / cb as f64).sqrt();
        let z = (emp - theory) / se;
        max_z = max_z.max(z.abs());
        res.push_scalar(&format!("{}_empirical", cmp.name), emp, se);
        res.push_scalar(&format!("{}_z", cmp.name), z, 0.0);
        if n == 1 {
            res.checks.push(Check::within(
                cmp.name,
                emp,
                theory,
                cfg.rel_err_threshold * theory,
                "empirical density ratio within the relative tolerance",
            ));
        } else {
            res.checks.push(Check::within(
                cmp.name,
                emp,
                theory,
                cfg.z_threshold * se,
                format!("empirical density ratio within {} standard errors", cfg.z_threshold),
            ));
        }
    }
    res.push_scalar("trials_with_root_at_infinity", skipped as f64, 0.0);
    res.max_abs_z_score = max_z;
    Ok(res.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_bins_are_disjoint() {
        let eps = ExperimentConfig::defaults(ExperimentKind::JointDensitySmallN).joint_radius;
        for n in 2..=4 {
            for cmp in comparisons(n) {
                for conf in [&cmp.a, &cmp.b] {
                    for i in 0..n {
                        for j in 0..i {
                            assert!(fs_distance(conf[i], conf[j]) > 2.0 * eps);
                        }
                    }
                }
            }
        }
    }
}
