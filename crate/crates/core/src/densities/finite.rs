//! Finite-`N` conditional zero densities and the unscaled correction.
//!
//! Conditioning on `s(p) = 0` adds `(i/2pi) ddbar log(1 - P_N(z,p)^2)` to the
//! expected zero current `(N/pi) omega`. In a real chart
//! `(i/2pi) ddbar f = (1/4pi) Delta f dA`, so against the area form of the
//! model the correction density is `(1/4pi) Delta_M log(1 - P_N^2)`.
//!
//! On the projective line, with `d` the distance to `p`, `c2 = cos^2 d`,
//! `u = -N log c2` and `q = e^{-u} = P_N^2`, the conditional density
//! against `omega_h = dA/(1+|z|^2)^2` is
//!
//! ```text
//! (N/pi) (1 - q (1 + N tan^2 d)) / (1 - q)^2
//! ```
//!
//! which tends to `(N/pi) kappa_1(r)` at `d = r/sqrt N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::densities::limit::{kappa_cond, kappa_numerator};
use crate::ensembles::{EnsembleSpec, Model};
use crate::error::{Error, Result};
use crate::kernels::{fs_sin_cos_sq, lambda_n, CoherentFrame};
use crate::numerics::quadrature::{graded_panels, refine_until, PanelRule};
use crate::numerics::special::{log1mexp, zeta_value};
use crate::numerics::tolerances::QUADRATURE_REL;
use crate::test_functions::TestFunction;

/// `u = 2 Lambda_N` beyond which `log(1 - e^{-u})` is below `1e-19`.
const TAIL_U: f64 = 45.0;
const MAX_LEVEL: usize = 6;

/// Density of the conditional expected zero measure given `s(p) = 0`,
/// against `omega_h` (projective line) or `dA` (Bargmann-Fock); the point
/// mass at `p` is excluded.
pub fn conditional_density_finite_n(spec: &EnsembleSpec, p: Complex64, z: Complex64) -> Result<f64> {
    if z == p {
        return Err(Error::domain(
            "conditional_density_finite_n",
            "the conditioned point carries a point mass",
        ));
    }
    match spec.model() {
        Model::ProjectiveLine { degree } => {
            let n = degree as f64;
            let (s2, c2) = fs_sin_cos_sq(z, p);
            if c2 == 0.0 {
                return Ok(n / PI);
            }
            let u = if c2 < 0.5 { -n * c2.ln() } else { -n * (-s2).ln_1p() };
            let q = (-u).exp();
            if q == 0.0 {
                return Ok(n / PI);
            }
            // h = tan^2 d + log cos^2 d
            let h = if s2 < 1e-2 {
                let mut sum = 0.0;
                let mut pow = s2;
                for k in 2..40 {
                    pow *= s2;
                    let term = (1.0 - 1.0 / k as f64) * pow;
                    sum += term;
                    if term < 1e-17 * sum {
                        break;
                    }
                }
                sum
            } else {
                s2 / c2 + c2.ln()
            };
            let den = (-u).exp_m1();
            Ok(n / PI * (kappa_numerator(u) - q * n * h) / (den * den))
        }
        Model::BargmannFock { .. } => Ok(kappa_cond(1, (z - p).norm()) / PI),
    }
}

/// Same density with the Laplacian taken by centred finite differences
/// (step `1e-4 (1 + |z|)`). Cross-check only.
pub fn conditional_density_fd(spec: &EnsembleSpec, p: Complex64, z: Complex64) -> Result<f64> {
    if z == p {
        return Err(Error::domain("conditional_density_fd", "z equals the conditioned point"));
    }
    let h = 1e-4 * (1.0 + z.norm());
    let f = |w: Complex64| log1mexp(2.0 * lambda_n(spec, w, p));
    let lap = (f(z + Complex64::new(h, 0.0)) + f(z - Complex64::new(h, 0.0)) + f(z + Complex64::new(0.0, h))
        + f(z - Complex64::new(0.0, h))
        - 4.0 * f(z))
        / (h * h);
    Ok(match spec.model() {
        Model::ProjectiveLine { degree } => {
            degree as f64 / PI + (1.0 + z.norm_sqr()).powi(2) * lap / (4.0 * PI)
        }
        Model::BargmannFock { .. } => 1.0 / PI + lap / (4.0 * PI),
    })
}

/// Total mass of the conditional density over the projective line. Adding
/// the unit point mass at `p` gives `N`.
pub fn conditional_total_mass(spec: &EnsembleSpec) -> Result<f64> {
    if !spec.is_projective() {
        return Err(Error::domain("conditional_total_mass", "infinite for the flat model"));
    }
    let zero = Complex64::new(0.0, 0.0);
    refine_until(
        |level| {
            let rule = PanelRule::new(&graded_panels(0.5 * PI, 8 << level, 12), 16);
            rule.integrate(|d| {
                let z = Complex64::new(d.tan(), 0.0);
                conditional_density_finite_n(spec, zero, z).unwrap_or(0.0) * PI * (2.0 * d).sin()
            })
        },
        QUADRATURE_REL,
        1.0,
        MAX_LEVEL,
    )
}

/// Metric Laplacian of a test function: Fubini-Study on the projective
/// line, Euclidean for Bargmann-Fock.
pub fn metric_laplacian(spec: &EnsembleSpec, phi: &TestFunction, z: Complex64) -> f64 {
    if spec.is_projective() {
        phi.fs_laplacian(z)
    } else {
        phi.laplacian(z)
    }
}

/// `int f omega_M` over the geodesic disc of radius `d_max` about `center`.
///
/// On the projective line the disc is parametrised through the rotation
/// taking `0` to `center`, so `f(z, d)` receives the point and its distance
/// and the weight is `sin d cos d dd dtheta`.
pub(crate) fn disc_integral(
    spec: &EnsembleSpec,
    center: Complex64,
    d_max: f64,
    level: usize,
    f: impl Fn(Complex64, f64) -> f64,
) -> f64 {
    let rule = PanelRule::new(&graded_panels(d_max, 4 << level, 12), 12);
    let n_theta = 16usize << level;
    let dth = 2.0 * PI / n_theta as f64;
    let projective = spec.is_projective();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = 0.0;
    for (&d, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (radius, jac) = if projective {
            (d.tan(), d.sin() * d.cos())
        } else {
            (d, d)
        };
        let mut ring = 0.0;
        for k in 0..n_theta {
            let zeta = Complex64::from_polar(radius, (k as f64 + 0.5) * dth);
            let z = if projective {
                (zeta + center) / (one - center.conj() * zeta)
            } else {
                center + zeta
            };
            ring += f(z, d);
        }
        acc += w * jac * ring * dth;
    }
    acc
}

/// Radius of the disc outside which `log(1 - P_N^2)` is negligible.
fn tail_radius(spec: &EnsembleSpec) -> f64 {
    match spec.model() {
        Model::ProjectiveLine { degree } => (TAIL_U / degree as f64).sqrt().min(0.5 * PI),
        Model::BargmannFock { .. } => TAIL_U.sqrt(),
    }
}

/// `log(1 - P_N^2)` as a function of the distance to `p`.
fn log_one_minus_p2(spec: &EnsembleSpec, d: f64) -> f64 {
    let u = match spec.model() {
        Model::ProjectiveLine { degree } => -(degree as f64) * (-d.sin().powi(2)).ln_1p(),
        Model::BargmannFock { .. } => d * d,
    };
    log1mexp(u)
}

/// `int_M log(1 - P_N(z,p)^2) (i/2pi) ddbar phi`, by adaptive quadrature
/// in geodesic polar coordinates about `p`.
pub fn unscaled_correction(spec: &EnsembleSpec, p: Complex64, phi: &TestFunction) -> Result<f64> {
    let d_max = tail_radius(spec);
    let floor = 1e-6 / spec.order() as f64;
    refine_until(
        |level| {
            disc_integral(spec, p, d_max, level, |z, d| {
                log_one_minus_p2(spec, d) * metric_laplacian(spec, phi, z) / (4.0 * PI)
            })
        },
        QUADRATURE_REL,
        floor,
        MAX_LEVEL,
    )
}

/// Correction for vanishing at several points, from the exact downdated
/// kernel `log(|Pi^{p_1..p_r}(z,z)| / |Pi(z,z)|)`.
///
/// Each disc only keeps the points for which its centre is the nearest
/// conditioning point, so the points must be far enough apart that the
/// integrand is negligible on the cell boundaries.
pub fn unscaled_correction_multi(spec: &EnsembleSpec, points: &[Complex64], phi: &TestFunction) -> Result<f64> {
    let d_max = tail_radius(spec);
    let dist = |a: Complex64, b: Complex64| match spec.model() {
        Model::ProjectiveLine { .. } => crate::kernels::fs_distance(a, b),
        Model::BargmannFock { .. } => (a - b).norm(),
    };
    let scale = spec.length_scale();
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[..i] {
            // half-separation at least sqrt(36) in scaled units
            if 0.5 * dist(a, b) * scale < 6.0 {
                return Err(Error::domain(
                    "unscaled_correction_multi",
                    format!("points {a} and {b} too close for cellwise quadrature"),
                ));
            }
        }
    }
    let frame = CoherentFrame::new(spec, points)?;
    let nearest = |z: Complex64| {
        (0..points.len())
            .min_by(|&a, &b| dist(z, points[a]).total_cmp(&dist(z, points[b])))
            .unwrap()
    };
    let floor = 1e-6 / spec.order() as f64;
    refine_until(
        |level| {
            points
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    disc_integral(spec, p, d_max, level, |z, _| {
                        if nearest(z) != j {
                            return 0.0;
                        }
                        frame.ln_conditional_ratio(spec, z) * metric_laplacian(spec, phi, z) / (4.0 * PI)
                    })
                })
                .sum()
        },
        QUADRATURE_REL,
        floor,
        MAX_LEVEL,
    )
}

/// `C_m = (1/2) pi^{m-1} zeta(m+1)`.
pub fn unscaled_constant(m: u32) -> Result<f64> {
    Ok(0.5 * PI.powi(m as i32 - 1) * zeta_value(m + 1)?)
}

/// Predicted limit of `N * unscaled_correction`:
/// `-C_1 (i ddbar phi / omega)(p) = -C_1 Delta_M phi(p) / 2`.
pub fn unscaled_target(spec: &EnsembleSpec, p: Complex64, phi: &TestFunction) -> Result<f64> {
    Ok(-unscaled_constant(1)? * 0.5 * metric_laplacian(spec, phi, p))
}

/// `int_C log(1 - e^{-|u|^2}) dA(u)`, equal to `-pi zeta(2)`.
pub fn flat_log_integral() -> Result<f64> {
    let r_max = TAIL_U.sqrt();
    refine_until(
        |level| {
            let rule = PanelRule::new(&graded_panels(r_max, 4 << level, 14), 16);
            rule.integrate(|r| 2.0 * PI * r * log1mexp(r * r))
        },
        QUADRATURE_REL,
        1.0,
        MAX_LEVEL,
    )
}
