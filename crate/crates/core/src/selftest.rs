//! Fast invariant suite behind `zerocond selftest`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::densities::{
    conditional_total_mass, flat_log_integral, joint_zero_density_unnormalized, kappa_cond, RadialProfile,
};
use crate::ensembles::{basis_eval, weighted_value, ConditionSpec, Conditioner, EnsembleSpec, SectionSample};
use crate::error::Result;
use crate::experiments::{self, ExperimentConfig, ExperimentKind};
use crate::kernels::{conditional_kernel_diag, diagonal, kernel_direct, kernel_eval};
use crate::numerics::{dilog, trial_rng};
use crate::output::summary_json;
use crate::zeros::find_zeros;

#[derive(Debug, Clone)]
pub struct SelfTestItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn item(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> SelfTestItem {
    match f() {
        Ok((passed, detail)) => SelfTestItem { name, passed, detail },
        Err(e) => SelfTestItem {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn run_selftest() -> Vec<SelfTestItem> {
    vec![
        item("monge_ampere_identity", || {
            let mut worst: f64 = 0.0;
            for e in -3..=1 {
                for s in [1.0, 2.0, 5.0] {
                    let t = s * 10f64.powi(e);
                    let prof = RadialProfile { t };
                    for m in 1..=4 {
                        let lhs = prof.g1().powi(m as i32 - 1) * (prof.g1() + t * prof.g2());
                        worst = worst.max((lhs / kappa_cond(m, t.sqrt()) - 1.0).abs());
                    }
                }
            }
            Ok((worst < 1e-12, format!("max relative deviation {worst:.2e}")))
        }),
        item("dilog_reflection", || {
            let mut worst: f64 = 0.0;
            for k in 1..20 {
                let x = k as f64 / 20.0;
                let id = PI * PI / 6.0 - x.ln() * (1.0 - x).ln();
                worst = worst.max((dilog(x)? + dilog(1.0 - x)? - id).abs());
            }
            Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
        }),
        item("kernel_closed_form", || {
            let spec = EnsembleSpec::projective_line(40)?;
            let mut worst: f64 = 0.0;
            for &(z, w) in &[(c(0.1, 0.2), c(-0.2, 0.3)), (c(1.5, -0.4), c(1.4, -0.1)), (c(0.0, 0.0), c(0.3, 0.0))] {
                let a = kernel_eval(&spec, z, w).pi_norm;
                let b = kernel_direct(&spec, z, w)?.norm();
                worst = worst.max((a - b).abs() / diagonal(&spec));
            }
            Ok((worst < 1e-12, format!("max deviation / diagonal {worst:.2e}")))
        }),
        item("conditional_kernel_identity", || {
            let spec = EnsembleSpec::projective_line(30)?;
            let p = c(0.2, -0.1);
            let mut worst: f64 = 0.0;
            for &z in &[c(0.25, -0.1), c(0.7, 0.4), c(-2.0, 1.0)] {
                let p2 = kernel_eval(&spec, z, p).p_n.powi(2);
                let a = conditional_kernel_diag(&spec, &[p], z)?;
                worst = worst.max((a - diagonal(&spec) * (1.0 - p2)).abs() / diagonal(&spec));
            }
            Ok((worst < 1e-10, format!("max deviation / diagonal {worst:.2e}")))
        }),
        item("conditioned_samples_vanish", || {
            let spec = EnsembleSpec::projective_line(50)?;
            let pts = [c(0.3, 0.1), c(-1.0, 0.5)];
            let cd = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&pts)?)?;
            let mut rng = trial_rng(1, 0);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let s = cd.sample(&spec, &mut rng);
                for &p in &pts {
                    let b = basis_eval(&spec, p)?;
                    worst = worst.max(weighted_value(&s, &b).norm() / (s.norm() * b.diagonal_kernel().sqrt()));
                }
            }
            Ok((worst < 1e-12, format!("max normalised |s(p)| {worst:.2e}")))
        }),
        item("roots_of_z2_minus_1", || {
            let spec = EnsembleSpec::projective_line(2)?;
            let a = (PI / 3.0).sqrt();
            let s = SectionSample {
                coeffs: vec![c(-a, 0.0), c(0.0, 0.0), c(a, 0.0)],
            };
            let zs = find_zeros(&s, &spec)?;
            let worst = zs
                .affine_roots
                .iter()
                .map(|r| (r.norm_sqr() - 1.0).abs() + r.im.abs())
                .fold(0.0, f64::max);
            Ok((zs.total() == 2 && worst < 1e-13, format!("{:?}", zs.affine_roots)))
        }),
        item("conditional_total_mass", || {
            let spec = EnsembleSpec::projective_line(25)?;
            let m = conditional_total_mass(&spec)?;
            Ok(((m - 24.0).abs() < 1e-6, format!("{m:.10} vs N-1 = 24")))
        }),
        item("flat_log_integral", || {
            let v = flat_log_integral()?;
            let target = -PI.powi(3) / 6.0;
            Ok(((v - target).abs() < 1e-8, format!("{v:.12} vs {target:.12}")))
        }),
        item("joint_density_n1", || {
            let r = joint_zero_density_unnormalized(&[c(0.0, 0.0)])? / joint_zero_density_unnormalized(&[c(1.0, 0.0)])?;
            Ok(((r - 4.0).abs() < 1e-12, format!("ratio {r}")))
        }),
        item("determinism_across_threads", || {
            let mut cfg = ExperimentConfig::defaults(ExperimentKind::CondDensity);
            cfg.degree = 20;
            cfg.trials = 300;
            cfg.chunk_size = 37;
            let a = summary_json(&experiments::run(&cfg)?)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(3)
                .build()
                .map_err(|e| crate::error::Error::Config(e.to_string()))?;
            let b = pool.install(|| experiments::run(&cfg).and_then(|r| summary_json(&r)))?;
            Ok((a == b, format!("{} bytes", a.len())))
        }),
    ]
}
