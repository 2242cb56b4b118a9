//! Szego kernels in closed form, their normalised versions and the
//! multi-point conditional (downdated) kernel.
//!
//! All kernel values are expressed in the unit frame, i.e. multiplied by
//! `h(z) h(w)`. For the projective line
//!
//! ```text
//! |Pi_N(z,w)| = (N+1)/pi * P_N(z,w),   P_N = cos^N d(z,w)
//! ```
//!
//! with `d` the Fubini-Study distance, `cos^2 d = |1+z conj(w)|^2 / ((1+|z|^2)(1+|w|^2))`.
//! Bargmann-Fock closed forms are those of the untruncated space.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{basis_eval, EnsembleSpec, Model, SectionSample};
use crate::error::{Error, Result};
use crate::numerics::tolerances;

/// `|Pi_N(z,w)|`, `P_N(z,w)` and `Lambda_N = -log P_N` at a point pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub pi_norm: f64,
    pub p_n: f64,
    /// `f64::INFINITY` when `p_n` is (or underflows to) zero.
    pub lambda_n: f64,
}

/// Squared sine and cosine of the Fubini-Study distance, each computed from
/// its own expression so neither loses precision near 0.
pub fn fs_sin_cos_sq(z: Complex64, w: Complex64) -> (f64, f64) {
    let nz = 1f64.hypot(z.norm());
    let nw = 1f64.hypot(w.norm());
    let s = ((z - w).norm() / nz / nw).powi(2);
    let c = ((Complex64::new(1.0, 0.0) + z * w.conj()).norm() / nz / nw).powi(2);
    (s.min(1.0), c.min(1.0))
}

/// Fubini-Study geodesic distance on the sphere of area `pi` (radius 1/2).
pub fn fs_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) + z * w.conj()).norm();
    num.atan2(den)
}

/// `Lambda_N(z,w) = -log P_N(z,w)`.
pub fn lambda_n(spec: &EnsembleSpec, z: Complex64, w: Complex64) -> f64 {
    match spec.model() {
        Model::ProjectiveLine { degree } => {
            let (s, c) = fs_sin_cos_sq(z, w);
            if c == 0.0 {
                return f64::INFINITY;
            }
            let ln_c = if c < 0.5 { c.ln() } else { (-s).ln_1p() };
            -0.5 * degree as f64 * ln_c
        }
        Model::BargmannFock { .. } => 0.5 * (z - w).norm_sqr(),
    }
}

/// Diagonal `|Pi_N(z,z)|`: `(N+1)/pi` on the projective line, `1/pi` for
/// Bargmann-Fock.
pub fn diagonal(spec: &EnsembleSpec) -> f64 {
    match spec.model() {
        Model::ProjectiveLine { degree } => (degree as f64 + 1.0) / PI,
        Model::BargmannFock { .. } => 1.0 / PI,
    }
}

pub fn kernel_eval(spec: &EnsembleSpec, z: Complex64, w: Complex64) -> KernelEval {
    let lambda = lambda_n(spec, z, w);
    let p_n = (-lambda).exp();
    KernelEval {
        pi_norm: diagonal(spec) * p_n,
        p_n,
        lambda_n: lambda,
    }
}

/// Complex kernel in the unit frame, `Pi_N(z,w) h(z) h(w)`, phase included.
pub fn weighted_kernel(spec: &EnsembleSpec, z: Complex64, w: Complex64) -> Complex64 {
    let k = kernel_eval(spec, z, w);
    if k.pi_norm == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = match spec.model() {
        Model::ProjectiveLine { degree } => {
            degree as f64 * (Complex64::new(1.0, 0.0) + z * w.conj()).arg()
        }
        Model::BargmannFock { .. } => (z * w.conj()).im,
    };
    Complex64::from_polar(k.pi_norm, phase)
}

/// Kernel by direct summation over the orthonormal basis (test oracle).
pub fn kernel_direct(spec: &EnsembleSpec, z: Complex64, w: Complex64) -> Result<Complex64> {
    let bz = basis_eval(spec, z)?;
    let bw = basis_eval(spec, w)?;
    Ok(bz
        .weighted
        .iter()
        .zip(&bw.weighted)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// Unit section proportional to `Pi_N(., p)`.
pub fn coherent_state(spec: &EnsembleSpec, p: Complex64) -> Result<SectionSample> {
    let b = basis_eval(spec, p)?;
    let norm = b.diagonal_kernel().sqrt();
    Ok(SectionSample {
        coeffs: b.weighted.iter().map(|w| w.conj() / norm).collect(),
    })
}

/// `R_N(u,v) = P_N(z0 + u/sqrt N, z0 + v/sqrt N) e^{|u-v|^2/2} - 1` in normal
/// coordinates at `z0`.
///
/// On the projective line the pair is placed at `0` and moved to `z0` by the
/// rotation `zeta -> (zeta + z0)/(1 - conj(z0) zeta)`; the affine coordinate
/// at the origin is normal to second order and `P_N` is rotation invariant,
/// so the result does not depend on `z0`.
pub fn near_diagonal_residual(spec: &EnsembleSpec, z0: Complex64, u: Complex64, v: Complex64) -> f64 {
    let scale = spec.length_scale();
    let (a, b) = match spec.model() {
        Model::ProjectiveLine { .. } => {
            let rot = |zeta: Complex64| (zeta + z0) / (Complex64::new(1.0, 0.0) - z0.conj() * zeta);
            (rot(u / scale), rot(v / scale))
        }
        Model::BargmannFock { .. } => (z0 + u, z0 + v),
    };
    let lam = lambda_n(spec, a, b);
    (0.5 * (u - v).norm_sqr() - lam).exp_m1()
}

/// `P_N(z,w)` for a pair at least `b sqrt(log N)` apart in scaled units,
/// where the kernel is `O(N^{-b^2/2})`.
pub fn far_offdiagonal_check(spec: &EnsembleSpec, z: Complex64, w: Complex64, b: f64) -> Result<f64> {
    let n = spec.order() as f64;
    let threshold = b * n.ln().max(0.0).sqrt();
    let dist = match spec.model() {
        Model::ProjectiveLine { .. } => fs_distance(z, w),
        Model::BargmannFock { .. } => (z - w).norm(),
    } * spec.length_scale();
    if dist < threshold {
        return Err(Error::domain(
            "far_offdiagonal_check",
            format!("scaled distance {dist:.6} below b sqrt(log N) = {threshold:.6}"),
        ));
    }
    Ok(kernel_eval(spec, z, w).p_n)
}

/// Unit coherent states at the conditioning points and their Gram data.
///
/// `I + W` is the Gram matrix of the unit coherent states
/// (`|W_ab| = P_N(p_a, p_b)` off the diagonal) and `B = transpose((I+W)^{-1})`.
#[derive(Debug, Clone)]
pub struct CoherentFrame {
    points: Vec<Complex64>,
    gram_perturbation: DMatrix<Complex64>,
    downdate: DMatrix<Complex64>,
    /// For each point `j`: the ordering with `j` first and its Cholesky factor.
    nearest_first: Vec<(Vec<usize>, nalgebra::Cholesky<Complex64, nalgebra::Dyn>)>,
    diag: f64,
}

impl CoherentFrame {
    pub fn new(spec: &EnsembleSpec, points: &[Complex64]) -> Result<Self> {
        let r = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Config(format!("conditioning point {p} repeated")));
            }
        }
        let diag = diagonal(spec);
        let gram = DMatrix::from_fn(r, r, |a, b| {
            if a == b {
                Complex64::new(1.0, 0.0)
            } else {
                weighted_kernel(spec, points[a], points[b]) / diag
            }
        });
        let eig = gram.clone().symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        let limit = tolerances::CONDITIONING_LIMIT;
        let condition_number = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(condition_number <= limit) {
            return Err(Error::Conditioning {
                condition_number,
                limit,
            });
        }
        let chol = nalgebra::Cholesky::new(gram.clone()).ok_or(Error::Conditioning {
            condition_number,
            limit,
        })?;
        let downdate = chol.inverse().transpose();
        let mut nearest_first = Vec::with_capacity(r);
        for j in 0..r {
            let perm: Vec<usize> = std::iter::once(j).chain((0..r).filter(|&a| a != j)).collect();
            let g = DMatrix::from_fn(r, r, |a, b| gram[(perm[a], perm[b])]);
            let c = nalgebra::Cholesky::new(g).ok_or(Error::Conditioning {
                condition_number,
                limit,
            })?;
            nearest_first.push((perm, c));
        }
        let gram_perturbation = gram - DMatrix::identity(r, r);
        Ok(Self {
            points: points.to_vec(),
            gram_perturbation,
            downdate,
            nearest_first,
            diag,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `W`.
    pub fn gram_perturbation(&self) -> &DMatrix<Complex64> {
        &self.gram_perturbation
    }

    /// `B`.
    pub fn downdate_matrix(&self) -> &DMatrix<Complex64> {
        &self.downdate
    }

    /// Spectral norm of `W` (bounded via Frobenius).
    pub fn perturbation_norm(&self) -> f64 {
        self.gram_perturbation.norm()
    }

    /// `|Pi_N^{p_1..p_r}(z,z)|`.
    pub fn conditional_diag(&self, spec: &EnsembleSpec, z: Complex64) -> f64 {
        self.diag * self.conditional_ratio(spec, z).max(0.0)
    }

    /// `|Pi_N^{p_1..p_r}(z,z)| / |Pi_N(z,z)|`.
    ///
    /// The Cholesky factor is taken with the point nearest to `z` first, so
    /// the leading term is `1 - P_N(z,p_j)^2` evaluated from `Lambda_N` and
    /// the ratio keeps full relative accuracy as `z -> p_j`.
    pub fn conditional_ratio(&self, spec: &EnsembleSpec, z: Complex64) -> f64 {
        let lambdas: Vec<f64> = self.points.iter().map(|&p| lambda_n(spec, p, z)).collect();
        let j = (0..lambdas.len())
            .min_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]))
            .expect("at least one point");
        let leading = -(-2.0 * lambdas[j]).exp_m1();
        if self.points.len() == 1 {
            return leading;
        }
        let (perm, chol) = &self.nearest_first[j];
        let k = nalgebra::DVector::from_iterator(
            perm.len(),
            perm.iter().map(|&a| weighted_kernel(spec, self.points[a], z) / self.diag),
        );
        let y = chol
            .l()
            .solve_lower_triangular(&k)
            .expect("Cholesky factor has a positive diagonal");
        leading - y.iter().skip(1).map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// `ln` of [`Self::conditional_ratio`], `-inf` exactly at a conditioning point.
    pub fn ln_conditional_ratio(&self, spec: &EnsembleSpec, z: Complex64) -> f64 {
        let r = self.conditional_ratio(spec, z);
        if r > 0.0 {
            r.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// `|Pi_N^{p_1..p_r}(z,z)|`, the diagonal of the kernel of sections
/// vanishing at every `p_j`.
pub fn conditional_kernel_diag(spec: &EnsembleSpec, points: &[Complex64], z: Complex64) -> Result<f64> {
    Ok(CoherentFrame::new(spec, points)?.conditional_diag(spec, z))
}
