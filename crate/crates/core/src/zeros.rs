//! Zeros of sampled sections: Aberth-Ehrlich on the monomial coefficients,
//! Newton polish, and scaled distances to a base point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{basis_eval, weighted_value, EnsembleSpec, Model, SectionSample};
use crate::error::{Error, Result};
use crate::kernels::fs_distance;
use crate::numerics::tolerances::{CONDITIONED_ROOT_RADIUS, ROOT_RESIDUAL};

const MAX_ITER: usize = 1000;
const POLISH_STEPS: usize = 3;
/// Roots beyond this modulus are checked in the swapped chart.
const NEAR_INFINITY: f64 = 1e6;
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// All zeros of one section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub affine_roots: Vec<Complex64>,
    pub roots_at_infinity: usize,
    /// Largest `|s(zeta)| h(zeta) / (||coeffs|| sqrt(|Pi(zeta,zeta)|))`; zero
    /// when every root is exact.
    pub residual_max: f64,
}

impl ZeroSet {
    pub fn total(&self) -> usize {
        self.affine_roots.len() + self.roots_at_infinity
    }
}

/// Scaled distance of a root to the base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRoot {
    pub radius: f64,
    /// The root sits on the conditioning point and belongs to the point mass.
    pub conditioned: bool,
}

/// Normalised residual of a candidate root (Cauchy-Schwarz makes it at most 1).
///
/// The common weight cancels, so basis values are taken relative to the
/// largest one; this stays finite where `h(z)` underflows.
pub fn root_residual(sample: &SectionSample, spec: &EnsembleSpec, z: Complex64) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("root_residual", "non-finite point"));
    }
    if z.norm() <= 1.0 {
        let b = basis_eval(spec, z)?;
        let v = weighted_value(sample, &b).norm();
        return Ok(v / (sample.norm() * b.diagonal_kernel().sqrt()));
    }
    let ln_rho = z.norm().ln();
    let phase = z / z.norm();
    let logs: Vec<f64> = (0..spec.dim()).map(|j| spec.ln_basis_norm(j) + j as f64 * ln_rho).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut v = Complex64::new(0.0, 0.0);
    let mut k = 0.0;
    let mut ph = Complex64::new(1.0, 0.0);
    for (a, l) in sample.coeffs.iter().zip(&logs) {
        let m = (l - top).exp();
        v += a * ph * m;
        k += m * m;
        ph *= phase;
    }
    Ok(v.norm() / (sample.norm() * k.sqrt()))
}

/// Radius `R` of the chart variable `w = z / R` the roots are solved in.
/// Bargmann-Fock zeros fill the disc of radius `sqrt(order)`, and in `w` the
/// monomial coefficients span `e^{order/2}` instead of `sqrt(order!)`.
fn chart_radius(spec: &EnsembleSpec) -> f64 {
    match spec.model() {
        Model::ProjectiveLine { .. } => 1.0,
        Model::BargmannFock { truncation } => (truncation.max(1) as f64).sqrt(),
    }
}

/// Monomial coefficients `a_j c_j R^j` scaled by a common power of `e` so
/// the largest has modulus one.
fn scaled_monomials(sample: &SectionSample, spec: &EnsembleSpec) -> Vec<Complex64> {
    let ln_r = chart_radius(spec).ln();
    let logs: Vec<f64> = sample
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| {
            if *a == Complex64::new(0.0, 0.0) {
                f64::NEG_INFINITY
            } else {
                a.norm().ln() + spec.ln_basis_norm(j) + j as f64 * ln_r
            }
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    sample
        .coeffs
        .iter()
        .zip(&logs)
        .map(|(a, &l)| {
            if l == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                (a / a.norm()) * (l - top).exp()
            }
        })
        .collect()
}

/// Polynomial stored constant term first.
struct Poly<'a> {
    c: &'a [Complex64],
}

impl Poly<'_> {
    fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// `p(z)/p'(z)`, through the reversed polynomial outside the unit disc.
    fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let n = self.degree();
        if z.norm_sqr() <= 1.0 {
            let (p, dp) = horner(self.c.iter().rev(), z);
            p / dp
        } else {
            // p(z) = z^n q(1/z), p'(z) = z^{n-1} (n q - w q')
            let w = z.inv();
            let (q, dq) = horner(self.c.iter(), w);
            z * q / (q * n as f64 - w * dq)
        }
    }
}

/// Value and derivative, coefficients given highest degree first.
fn horner<'a>(coeffs: impl Iterator<Item = &'a Complex64>, z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth-Ehrlich with Gauss-Seidel updates from an equal-area spiral of
/// starting points. Returns the iterates and whether all corrections fell
/// below the stopping threshold.
fn aberth(poly: &Poly) -> (Vec<Complex64>, usize, bool) {
    let n = poly.degree();
    let c = poly.c;
    let scale = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let q = (k as f64 + 0.5) / n as f64;
            let r = (q / (1.0 - q)).sqrt() * scale;
            Complex64::from_polar(r, GOLDEN_ANGLE * k as f64 + 0.4)
        })
        .collect();
    let mut done = vec![false; n];
    for iter in 0..MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let ratio = poly.newton_ratio(z[k]);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let den = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if den.norm() > 0.0 && den.is_finite() { ratio / den } else { ratio };
            if step.is_finite() {
                z[k] -= step;
            }
            if !step.is_finite() || step.norm() <= 1e-15 * z[k].norm() {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return (z, iter + 1, true);
        }
    }
    (z, MAX_ITER, false)
}

/// All `N` zeros on the projective line (or of the truncated
/// Bargmann-Fock polynomial).
pub fn find_zeros(sample: &SectionSample, spec: &EnsembleSpec) -> Result<ZeroSet> {
    if sample.coeffs.len() != spec.dim() {
        return Err(Error::domain("find_zeros", "coefficient length does not match the ensemble"));
    }
    if sample.is_zero() {
        return Err(Error::domain("find_zeros", "the zero section has no isolated zeros"));
    }
    let c = scaled_monomials(sample, spec);
    let zero = Complex64::new(0.0, 0.0);
    let low = c.iter().take_while(|x| **x == zero).count();
    let high = c.iter().rev().take_while(|x| **x == zero).count();
    let core = &c[low..c.len() - high];
    let mut affine = vec![zero; low];
    let mut at_infinity = high;
    let mut iterations = 0;
    let mut converged = true;
    if core.len() > 1 {
        let poly = Poly { c: core };
        let (mut roots, it, ok) = aberth(&poly);
        iterations = it;
        converged = ok;
        for r in roots.iter_mut() {
            for _ in 0..POLISH_STEPS {
                let step = poly.newton_ratio(*r);
                if !step.is_finite() || step.norm() <= 1e-17 * r.norm() {
                    break;
                }
                *r -= step;
            }
        }
        let radius = chart_radius(spec);
        for r in roots {
            let swapped = r.inv();
            let r = r * radius;
            if r.norm() > NEAR_INFINITY && swapped.norm() < 1.0 / NEAR_INFINITY && spec.is_projective() {
                at_infinity += 1;
            } else {
                affine.push(r);
            }
        }
    }
    let mut residual_max: f64 = 0.0;
    for &r in &affine[low..] {
        residual_max = residual_max.max(root_residual(sample, spec, r)?);
    }
    if !(residual_max <= ROOT_RESIDUAL) || (!converged && residual_max > ROOT_RESIDUAL) {
        return Err(Error::NonConvergence {
            iterations,
            residual: residual_max,
            trial: None,
        });
    }
    Ok(ZeroSet {
        affine_roots: affine,
        roots_at_infinity: at_infinity,
        residual_max,
    })
}

/// Scaled distances `sqrt(N) d(zeta, p)` (Fubini-Study geodesic distance)
/// or `|zeta - p|` for Bargmann-Fock. Roots at infinity are included on
/// the projective line.
pub fn scaled_radii(zs: &ZeroSet, p: Complex64, spec: &EnsembleSpec) -> Vec<ScaledRoot> {
    let scale = spec.length_scale();
    let flag = |radius: f64| ScaledRoot {
        radius,
        conditioned: radius < CONDITIONED_ROOT_RADIUS,
    };
    let mut out: Vec<ScaledRoot> = zs
        .affine_roots
        .iter()
        .map(|&z| match spec.model() {
            Model::ProjectiveLine { .. } => flag(scale * fs_distance(z, p)),
            Model::BargmannFock { .. } => flag((z - p).norm()),
        })
        .collect();
    if spec.is_projective() {
        let d_inf = 1f64.atan2(p.norm());
        out.extend((0..zs.roots_at_infinity).map(|_| flag(scale * d_inf)));
    }
    out
}
