//! Hermitian Gaussian ensembles on the two model geometries and exact
//! linear-constraint conditioning.
//!
//! Sections are stored as coefficient vectors in the L^2-orthonormal basis.
//! For the projective line of degree `N` the basis in the affine chart is
//! `f_j(z) = sqrt((N+1)/pi) sqrt(C(N,j)) z^j` with pointwise Hermitian weight
//! `h(z) = (1+|z|^2)^{-N/2}`; for the truncated Bargmann-Fock space it is
//! `pi^{-1/2} z^j / sqrt(j!)` with weight `e^{-|z|^2/2}`.
//!
//! Values are carried around *weighted*, i.e. as `f_j(z) h(z)`: these are
//! bounded by the diagonal kernel and never overflow, whatever the degree.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::{ln_binomial, ln_factorial};
use crate::numerics::{sample_std_complex_gaussian, tolerances};

pub const DEFAULT_MAX_DEGREE: u32 = 2000;

/// Model geometry and size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// Degree-`N` sections of O(N) over CP^1 with the Fubini-Study metric.
    ProjectiveLine { degree: u32 },
    /// Bargmann-Fock space on C truncated after `z^truncation`.
    BargmannFock { truncation: u32 },
}

impl Model {
    /// Degree `N` or truncation order.
    pub fn order(&self) -> u32 {
        match *self {
            Model::ProjectiveLine { degree } => degree,
            Model::BargmannFock { truncation } => truncation,
        }
    }
}

/// An ensemble with its basis normalisations precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    model: Model,
    /// `ln |coefficient of z^j in f_j|`
    ln_norm: Vec<f64>,
    /// `|coeff_j| / |coeff_{j-1}|`, index 0 unused
    step: Vec<f64>,
}

impl EnsembleSpec {
    pub fn new(model: Model) -> Result<Self> {
        Self::with_degree_cap(model, DEFAULT_MAX_DEGREE)
    }

    pub fn with_degree_cap(model: Model, cap: u32) -> Result<Self> {
        let n = model.order();
        if n < 1 {
            return Err(Error::Config("degree/truncation must be at least 1".into()));
        }
        if n > cap {
            return Err(Error::Config(format!(
                "degree/truncation {n} exceeds the cap {cap}"
            )));
        }
        let ln_norm: Vec<f64> = match model {
            Model::ProjectiveLine { degree } => {
                let c = 0.5 * ((degree as f64 + 1.0) / PI).ln();
                (0..=degree).map(|j| c + 0.5 * ln_binomial(degree, j)).collect()
            }
            Model::BargmannFock { truncation } => {
                let c = -0.5 * PI.ln();
                (0..=truncation).map(|j| c - 0.5 * ln_factorial(j)).collect()
            }
        };
        let step = std::iter::once(0.0)
            .chain(ln_norm.windows(2).map(|w| (w[1] - w[0]).exp()))
            .collect();
        Ok(Self {
            model,
            ln_norm,
            step,
        })
    }

    pub fn projective_line(degree: u32) -> Result<Self> {
        Self::new(Model::ProjectiveLine { degree })
    }

    pub fn bargmann_fock(truncation: u32) -> Result<Self> {
        Self::new(Model::BargmannFock { truncation })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// `N` for the projective line, the truncation order for Bargmann-Fock.
    pub fn order(&self) -> u32 {
        self.model.order()
    }

    /// Basis dimension `d`.
    pub fn dim(&self) -> usize {
        self.ln_norm.len()
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.model, Model::ProjectiveLine { .. })
    }

    /// `ln |c_j|` where `f_j(z) = c_j z^j`.
    pub fn ln_basis_norm(&self, j: usize) -> f64 {
        self.ln_norm[j]
    }

    /// `ln h(z)`.
    pub fn ln_h_weight(&self, z: Complex64) -> f64 {
        match self.model {
            Model::ProjectiveLine { degree } => -0.5 * degree as f64 * z.norm_sqr().ln_1p(),
            Model::BargmannFock { .. } => -0.5 * z.norm_sqr(),
        }
    }

    /// Scaling factor turning raw chart distances into unit-density units:
    /// `sqrt(N)` on the projective line, 1 for Bargmann-Fock.
    pub fn length_scale(&self) -> f64 {
        match self.model {
            Model::ProjectiveLine { degree } => (degree as f64).sqrt(),
            Model::BargmannFock { .. } => 1.0,
        }
    }

    /// Index of the basis element with the largest weighted magnitude at
    /// radius `rho` (approximately).
    fn peak_index(&self, rho: f64) -> usize {
        let n = self.order() as f64;
        let s = rho * rho;
        let j = match self.model {
            Model::ProjectiveLine { .. } => n * s / (1.0 + s),
            Model::BargmannFock { .. } => s,
        };
        (j.round().max(0.0) as usize).min(self.dim() - 1)
    }
}

/// Weighted basis values `f_j(z) h(z)` at a point, plus `ln h(z)` so raw
/// values can be recovered where they are representable.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub weighted: Vec<Complex64>,
    pub ln_h_weight: f64,
}

impl BasisEval {
    pub fn h_weight(&self) -> f64 {
        self.ln_h_weight.exp()
    }

    /// Unweighted values; may overflow for large degrees far from the origin.
    pub fn raw(&self) -> Vec<Complex64> {
        let inv = (-self.ln_h_weight).exp();
        self.weighted.iter().map(|w| w * inv).collect()
    }

    /// `sum_j |f_j(z)|^2 h(z)^2 = ||Pi(z,z)||`.
    pub fn diagonal_kernel(&self) -> f64 {
        self.weighted.iter().map(|w| w.norm_sqr()).sum()
    }
}

/// Weighted basis values at `z`.
///
/// Starts from the dominant index in log space and runs the two-term ratio
/// recurrence outward, so terms only underflow when they are negligible.
pub fn basis_eval(spec: &EnsembleSpec, z: Complex64) -> Result<BasisEval> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("basis_eval", "non-finite point"));
    }
    let d = spec.dim();
    let ln_h = spec.ln_h_weight(z);
    let mut weighted = vec![Complex64::new(0.0, 0.0); d];
    let rho = z.norm();
    if rho == 0.0 {
        weighted[0] = Complex64::new((spec.ln_norm[0] + ln_h).exp(), 0.0);
        return Ok(BasisEval {
            weighted,
            ln_h_weight: ln_h,
        });
    }
    let k = spec.peak_index(rho);
    let ln_rho = rho.ln();
    let phase = z / rho;
    let mag = (spec.ln_norm[k] + k as f64 * ln_rho + ln_h).exp();
    weighted[k] = phase.powu(k as u32) * mag;
    for j in k + 1..d {
        weighted[j] = weighted[j - 1] * z * spec.step[j];
    }
    let zinv = phase.conj() / rho;
    for j in (0..k).rev() {
        weighted[j] = weighted[j + 1] * zinv / spec.step[j + 1];
    }
    Ok(BasisEval {
        weighted,
        ln_h_weight: ln_h,
    })
}

/// Coefficients of one random section in the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionSample {
    pub coeffs: Vec<Complex64>,
}

impl SectionSample {
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }
}

/// Draw i.i.d. standard complex Gaussian coefficients.
pub fn sample_section<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> SectionSample {
    loop {
        let coeffs: Vec<Complex64> = (0..spec.dim())
            .map(|_| sample_std_complex_gaussian(rng))
            .collect();
        let s = SectionSample { coeffs };
        if !s.is_zero() {
            return s;
        }
    }
}

/// `(raw value, h-norm)` of a section at `z`: `raw = sum a_j f_j(z)`,
/// `h_norm = |raw| h(z)`.
pub fn evaluate_section(
    sample: &SectionSample,
    spec: &EnsembleSpec,
    z: Complex64,
) -> Result<(Complex64, f64)> {
    let b = basis_eval(spec, z)?;
    let weighted = weighted_value(sample, &b);
    Ok((weighted * (-b.ln_h_weight).exp(), weighted.norm()))
}

/// `sum a_j f_j(z) h(z)`.
pub fn weighted_value(sample: &SectionSample, basis: &BasisEval) -> Complex64 {
    sample
        .coeffs
        .iter()
        .zip(&basis.weighted)
        .map(|(a, w)| a * w)
        .sum()
}

/// Point constraints `s(p_j) = v_j`.
///
/// Values are expressed in the unit frame of the fibre, i.e. as the
/// weighted value `s(p) h(p)`; zero constraints are frame independent.
/// Points live in the affine chart; the point at infinity is not accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSpec {
    constraints: Vec<(Complex64, Complex64)>,
}

impl ConditionSpec {
    pub fn new(constraints: Vec<(Complex64, Complex64)>) -> Result<Self> {
        for (i, (p, v)) in constraints.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite() && v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Config(format!("constraint {i} is not finite")));
            }
            if constraints[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::Config(format!("conditioning point {p} repeated")));
            }
        }
        Ok(Self { constraints })
    }

    /// Vanishing at every listed point.
    pub fn vanishing_at(points: &[Complex64]) -> Result<Self> {
        Self::new(points.iter().map(|&p| (p, Complex64::new(0.0, 0.0))).collect())
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.constraints.iter().map(|c| c.0)
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.constraints.iter().map(|c| c.1)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn all_zero(&self) -> bool {
        self.values().all(|v| v == Complex64::new(0.0, 0.0))
    }
}

/// Conditional sampler for one `(EnsembleSpec, ConditionSpec)` pair.
///
/// The constraint covectors are orthonormalised once (Gram-Schmidt with a
/// second reorthogonalisation pass). A sample is the projection of an
/// unconditioned draw onto the kernel of the evaluation map plus the
/// minimum-norm interpolant of the prescribed values.
#[derive(Debug, Clone)]
pub struct Conditioner {
    /// Orthonormal basis of the span of conjugated constraint covectors.
    q: Vec<Vec<Complex64>>,
    /// Coordinates of the minimum-norm interpolant in `q`.
    target: Vec<Complex64>,
    condition_number: f64,
}

impl Conditioner {
    pub fn new(spec: &EnsembleSpec, cond: &ConditionSpec) -> Result<Self> {
        Self::with_limit(spec, cond, tolerances::CONDITIONING_LIMIT)
    }

    pub fn with_limit(spec: &EnsembleSpec, cond: &ConditionSpec, limit: f64) -> Result<Self> {
        let d = spec.dim();
        let r = cond.len();
        if r >= d {
            return Err(Error::Config(format!(
                "{r} constraints leave no freedom in a {d}-dimensional space"
            )));
        }
        // rows c_a with s(p_a) h(p_a) = c_a . coeffs
        let mut cols = Vec::with_capacity(r);
        let mut scale = Vec::with_capacity(r);
        for p in cond.points() {
            let b = basis_eval(spec, p)?;
            let norm = b.diagonal_kernel().sqrt();
            cols.push(b.weighted.iter().map(|w| w.conj() / norm).collect::<Vec<_>>());
            scale.push(norm);
        }
        // C^H D^{-1} = Q R
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(r);
        let mut rmat = DMatrix::<Complex64>::zeros(r, r);
        for (a, col) in cols.iter().enumerate() {
            let mut v = col.clone();
            for _pass in 0..2 {
                for (b, qb) in q.iter().enumerate() {
                    let proj = dot(qb, &v);
                    rmat[(b, a)] += proj;
                    for (vi, qi) in v.iter_mut().zip(qb) {
                        *vi -= proj * qi;
                    }
                }
            }
            let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            rmat[(a, a)] = Complex64::new(nv, 0.0);
            if nv == 0.0 {
                return Err(Error::Conditioning {
                    condition_number: f64::INFINITY,
                    limit,
                });
            }
            v.iter_mut().for_each(|x| *x /= nv);
            q.push(v);
        }
        let sv = rmat.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        let condition_number = if smin > 0.0 {
            (smax / smin).powi(2)
        } else {
            f64::INFINITY
        };
        if !(condition_number <= limit) {
            return Err(Error::Conditioning {
                condition_number,
                limit,
            });
        }
        // R^H y = D^{-1} v, forward substitution
        let rhs: Vec<Complex64> = cond.values().zip(&scale).map(|(v, s)| v / s).collect();
        let rh = rmat.adjoint();
        let mut y = vec![Complex64::new(0.0, 0.0); r];
        for i in 0..r {
            let mut acc = rhs[i];
            for j in 0..i {
                acc -= rh[(i, j)] * y[j];
            }
            y[i] = acc / rh[(i, i)];
        }
        Ok(Self {
            q,
            target: y,
            condition_number,
        })
    }

    /// Condition number of the normalised constraint Gram matrix.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Map any coefficient vector onto the constraint set (orthogonal
    /// projection onto the affine subspace).
    pub fn project(&self, sample: &SectionSample) -> SectionSample {
        let mut a = sample.coeffs.clone();
        for (qb, yb) in self.q.iter().zip(&self.target) {
            let proj = dot(qb, &a);
            let shift = yb - proj;
            for (ai, qi) in a.iter_mut().zip(qb) {
                *ai += shift * qi;
            }
        }
        SectionSample { coeffs: a }
    }

    pub fn sample<R: Rng + ?Sized>(&self, spec: &EnsembleSpec, rng: &mut R) -> SectionSample {
        loop {
            let s = self.project(&sample_section(spec, rng));
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Covariance `I - Q Q^H` of conditioned coefficients (zero values).
    pub fn kernel_projector(&self, d: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::identity(d, d);
        for qb in &self.q {
            let v = DVector::from_column_slice(qb);
            m -= &v * v.adjoint();
        }
        m
    }
}

/// `<x, y> = sum conj(x_i) y_i`.
fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// One conditioned draw. Builds a [`Conditioner`]; reuse one directly when
/// sampling repeatedly.
pub fn condition_sample<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    cond: &ConditionSpec,
    rng: &mut R,
) -> Result<SectionSample> {
    Ok(Conditioner::new(spec, cond)?.sample(spec, rng))
}
