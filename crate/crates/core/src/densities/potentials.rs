//! `Y`, `F`, `G~` and the bipotential `Q_N = G~(P_N)`, plus the double
//! quadrature that turns `Q_N` into the variance of a smooth linear
//! statistic of the zeros.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::densities::finite::{disc_integral, metric_laplacian};
use crate::ensembles::{EnsembleSpec, Model};
use crate::error::Result;
use crate::kernels::{fs_distance, lambda_n};
use crate::numerics::quadrature::{graded_panels, refine_until, PanelRule};
use crate::numerics::special::{dilog_unchecked, log1mexp};
use crate::numerics::tolerances::QUADRATURE_REL;
use crate::test_functions::TestFunction;

/// The one-variable functions of `Lambda = -log P`.
///
/// `Y(l) = log(1 - e^{-2l})`, `F(l) = -(1/2pi^2) int_l^inf Y`,
/// `G~(t) = Li_2(t^2) / 4pi^2`, related by `F(l) = G~(e^{-l})`.
#[derive(Debug, Clone, Copy, Default)]
pub struct YFunctions;

impl YFunctions {
    pub fn y(lambda: f64) -> f64 {
        if lambda == f64::INFINITY {
            0.0
        } else {
            log1mexp(2.0 * lambda)
        }
    }

    pub fn f(lambda: f64) -> f64 {
        if lambda == f64::INFINITY {
            0.0
        } else {
            Self::g_tilde((-lambda).exp())
        }
    }

    pub fn g_tilde(t: f64) -> f64 {
        dilog_unchecked((t * t).clamp(0.0, 1.0)) / (4.0 * PI * PI)
    }

    /// `F` by quadrature of `Y` (oracle for the closed form).
    pub fn f_by_quadrature(lambda: f64) -> Result<f64> {
        // substitute s = lambda + x, x in [0, 25]; Y ~ -e^{-2s} beyond
        refine_until(
            |level| {
                let rule = PanelRule::new(&graded_panels(25.0, 8 << level, 12), 16);
                rule.integrate(|x| Self::y(lambda + x))
            },
            QUADRATURE_REL,
            1e-12,
            6,
        )
        .map(|v| -v / (2.0 * PI * PI))
    }
}

/// `Q_N(z,w) = Li_2(P_N(z,w)^2) / 4 pi^2`.
pub fn bipotential(spec: &EnsembleSpec, z: Complex64, w: Complex64) -> f64 {
    YFunctions::f(lambda_n(spec, z, w))
}

/// `Var (Z_s, phi) = int int Q_N(z,w) (1/2 Delta phi)(z) (1/2 Delta phi)(w) dA dA`.
///
/// Both integrals are taken against the model area form with the metric
/// Laplacian. The outer one runs over the support of `phi`, the inner one
/// over the disc about `z` where `Q_N` is not negligible.
pub fn variance_quadrature(spec: &EnsembleSpec, phi: &TestFunction) -> Result<f64> {
    let supports = phi.support();
    if supports.is_empty() {
        return Ok(0.0);
    }
    let inner_radius = match spec.model() {
        // Q_N < 1e-22 beyond u = 2 Lambda = 50
        Model::ProjectiveLine { degree } => (50.0 / degree as f64).sqrt().min(0.5 * PI),
        Model::BargmannFock { .. } => 50f64.sqrt(),
    };
    let projective = spec.is_projective();
    let outer_discs: Vec<(Complex64, f64)> = supports
        .iter()
        .map(|&(c, r)| {
            if projective {
                let d = (0..64)
                    .map(|k| fs_distance(c, c + Complex64::from_polar(r, 2.0 * PI * k as f64 / 64.0)))
                    .fold(0.0, f64::max);
                (c, (1.05 * d).min(0.5 * PI))
            } else {
                (c, r)
            }
        })
        .collect();
    let half_lap = |z: Complex64| 0.5 * metric_laplacian(spec, phi, z);
    let covered = |z: Complex64, upto: usize| {
        outer_discs[..upto].iter().any(|&(c, d)| {
            let dist = if projective { fs_distance(c, z) } else { (c - z).norm() };
            dist < d
        })
    };
    refine_until(
        |level| {
            outer_discs
                .iter()
                .enumerate()
                .map(|(i, &(c, d_out))| {
                    // nodes of earlier discs are not counted twice; the sum is
                    // sequential so the result does not depend on the pool
                    let rings = outer_ring_nodes(spec, c, d_out, level);
                    rings
                        .par_iter()
                        .map(|&(z, w)| {
                            if covered(z, i) {
                                return 0.0;
                            }
                            let lz = half_lap(z);
                            if lz == 0.0 {
                                return 0.0;
                            }
                            let inner = disc_integral(spec, z, inner_radius, level, |x, _| {
                                bipotential(spec, z, x) * half_lap(x)
                            });
                            w * lz * inner
                        })
                        .collect::<Vec<f64>>()
                        .iter()
                        .sum::<f64>()
                })
                .sum()
        },
        1e-6,
        1e-12,
        3,
    )
}

/// Flattened nodes of [`disc_integral`] so the outer sum can be split
/// across threads.
fn outer_ring_nodes(spec: &EnsembleSpec, center: Complex64, d_max: f64, level: usize) -> Vec<(Complex64, f64)> {
    let rule = PanelRule::new(&graded_panels(d_max, 4 << level, 6), 12);
    let n_theta = 16usize << level;
    let dth = 2.0 * PI / n_theta as f64;
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(rule.nodes.len() * n_theta);
    for (&d, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (radius, jac) = if spec.is_projective() {
            (d.tan(), d.sin() * d.cos())
        } else {
            (d, d)
        };
        for k in 0..n_theta {
            let zeta = Complex64::from_polar(radius, (k as f64 + 0.5) * dth);
            let z = if spec.is_projective() {
                (zeta + center) / (one - center.conj() * zeta)
            } else {
                center + zeta
            };
            out.push((z, w * jac * dth));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_tilde_and_f_relations() {
        assert!((YFunctions::g_tilde(1.0) - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(YFunctions::f(f64::INFINITY), 0.0);
        assert_eq!(YFunctions::y(f64::INFINITY), 0.0);
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let l = 0.1 * k as f64;
            assert!(YFunctions::y(l) < 0.0);
            let f = YFunctions::f(l);
            assert!(f < prev);
            prev = f;
        }
    }

    #[test]
    fn f_closed_form_matches_quadrature() {
        for &l in &[0.05, 0.3, 1.0, 2.5] {
            let a = YFunctions::f(l);
            let b = YFunctions::f_by_quadrature(l).unwrap();
            assert!((a - b).abs() < 1e-10, "l={l}: {a} {b}");
        }
    }

    #[test]
    fn bipotential_values() {
        let spec = EnsembleSpec::projective_line(60).unwrap();
        let z = Complex64::new(0.3, 0.1);
        assert!((bipotential(&spec, z, z) - 1.0 / 24.0).abs() < 1e-15);
        let far = bipotential(&spec, Complex64::new(0.0, 0.0), Complex64::new(3.0, 0.0));
        assert!(far <= 1e-12);
        let w = Complex64::new(0.35, 0.05);
        let p = crate::kernels::kernel_eval(&spec, z, w).p_n;
        let direct = crate::numerics::dilog(p * p).unwrap() / (4.0 * PI * PI);
        assert!((bipotential(&spec, z, w) - direct).abs() < 1e-10);
    }

    #[test]
    fn constant_has_zero_variance() {
        let spec = EnsembleSpec::projective_line(10).unwrap();
        assert_eq!(variance_quadrature(&spec, &TestFunction::Constant { value: 2.0 }).unwrap(), 0.0);
    }

    #[test]
    fn variance_is_quadratic_in_phi() {
        let spec = EnsembleSpec::projective_line(20).unwrap();
        let phi = TestFunction::bump(Complex64::new(0.0, 0.0), 0.6);
        let v1 = variance_quadrature(&spec, &phi).unwrap();
        let v2 = variance_quadrature(&spec, &phi.scaled(2.0)).unwrap();
        assert!(v1 > 0.0);
        assert!((v2 / v1 - 4.0).abs() < 1e-9);
    }
}
