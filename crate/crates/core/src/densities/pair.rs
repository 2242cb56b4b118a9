//! Two-point function of the zeros at finite `N` on the projective line.

use crate::densities::limit::pair_correlation_limit;
use crate::ensembles::{EnsembleSpec, Model};

/// `rho_2(z, w) / (rho_1(z) rho_1(w))` at Fubini-Study distance `d`.
///
/// Uses the kernel formula `per(C - B A^{-1} B^*) / det A` at `z = 0`,
/// `w = tan d`, with rows rescaled by `(1+|z|^2)^{-N/2}` so only `P_N`
/// appears. Bargmann-Fock returns the limit at `r = d`.
pub fn pair_correlation_finite_n(spec: &EnsembleSpec, d: f64) -> f64 {
    let n = match spec.model() {
        Model::ProjectiveLine { degree } => degree as f64,
        Model::BargmannFock { .. } => return pair_correlation_limit(d),
    };
    if d <= 0.0 {
        return 0.0;
    }
    let (s, c) = d.sin_cos();
    let t = s / c;
    let c2 = c * c;
    let p = c.powf(n);
    let one_m_p2 = -(n * c2.ln()).exp_m1();
    // A = [[1, P], [P, 1]]; B = [[0, N t P], [0, N t c^2]];
    // C = [[N, N P], [N P, N (1 + N t^2) c^4]]
    let (b12, b22) = (n * t * p, n * t * c2);
    let a_inv = [[1.0 / one_m_p2, -p / one_m_p2], [-p / one_m_p2, 1.0 / one_m_p2]];
    // B A^{-1} B^T with the first column of B zero
    let bab = |i: usize, j: usize| {
        let bi = if i == 0 { b12 } else { b22 };
        let bj = if j == 0 { b12 } else { b22 };
        bi * a_inv[1][1] * bj
    };
    let s11 = n - bab(0, 0);
    let s12 = n * p - bab(0, 1);
    let s22 = n * (1.0 + n * t * t) * c2 * c2 - bab(1, 1);
    let per = s11 * s22 + s12 * s12;
    per / (n * n * c2 * c2 * one_m_p2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_zero_has_no_pairs() {
        let spec = EnsembleSpec::projective_line(1).unwrap();
        for &d in &[0.1, 0.7, 1.3] {
            assert!(pair_correlation_finite_n(&spec, d).abs() < 1e-12);
        }
    }

    #[test]
    fn approaches_the_limit() {
        let spec = EnsembleSpec::with_degree_cap(Model::ProjectiveLine { degree: 40000 }, 40000).unwrap();
        for &r in &[0.3, 1.0, 2.0, 3.0] {
            let a = pair_correlation_finite_n(&spec, r / 200.0);
            let b = pair_correlation_limit(r);
            assert!((a / b - 1.0).abs() < 1e-3, "r={r}: {a} {b}");
        }
    }

    #[test]
    fn uncorrelated_far_apart() {
        let spec = EnsembleSpec::projective_line(100).unwrap();
        assert!((pair_correlation_finite_n(&spec, 1.0) - 1.0).abs() < 1e-12);
    }
}
