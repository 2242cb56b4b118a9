//! Unnormalised joint density of the `N` zeros of a random degree-`N`
//! polynomial on the projective line.
//!
//! ```text
//! |Delta(zeta)|^2 / ( int prod_j |z - zeta_j|^2 (1+|z|^2)^{-N} dnu(z) )^{N+1}
//! ```
//!
//! with `dnu = dA/(1+|z|^2)^2`, against Lebesgue measure on the roots. The
//! inner integral is evaluated exactly from the monomial coefficients
//! `c_j` of `prod (z - zeta_j)`: `sum |c_j|^2 pi j! (N-j)! / (N+1)!`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{gauss_legendre, refine_until};
use crate::numerics::special::ln_factorial;

pub const MAX_JOINT_DEGREE: usize = 12;

fn check(zeros: &[Complex64]) -> Result<()> {
    if zeros.is_empty() || zeros.len() > MAX_JOINT_DEGREE {
        return Err(Error::domain(
            "joint_zero_density",
            format!("need 1 <= N <= {MAX_JOINT_DEGREE}, got {}", zeros.len()),
        ));
    }
    if zeros.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::domain("joint_zero_density", "zeros must be finite"));
    }
    Ok(())
}

/// Coefficients of `prod_j (z - zeta_j)`, constant term first.
pub fn monic_coefficients(zeros: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in zeros {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (j, &cj) in c.iter().enumerate() {
            next[j + 1] += cj;
            next[j] -= cj * z;
        }
        c = next;
    }
    c
}

fn vandermonde_sq(zeros: &[Complex64]) -> f64 {
    let mut v = 1.0;
    for i in 0..zeros.len() {
        for j in 0..i {
            v *= (zeros[i] - zeros[j]).norm_sqr();
        }
    }
    v
}

/// `int prod_j |z - zeta_j|^2 (1+|z|^2)^{-N} dnu`, exact.
pub fn inner_integral(zeros: &[Complex64]) -> Result<f64> {
    check(zeros)?;
    let n = zeros.len() as u32;
    let c = monic_coefficients(zeros);
    Ok(c.iter()
        .enumerate()
        .map(|(j, cj)| {
            let j = j as u32;
            cj.norm_sqr() * PI * (ln_factorial(j) + ln_factorial(n - j) - ln_factorial(n + 1)).exp()
        })
        .sum())
}

/// The same integral by quadrature on the sphere (oracle).
pub fn inner_integral_quadrature(zeros: &[Complex64]) -> Result<f64> {
    check(zeros)?;
    let n = zeros.len() as i32;
    refine_until(
        |level| {
            // z = tan(psi) e^{i theta}; dnu = sin psi cos psi dpsi dtheta
            let (x, w) = gauss_legendre(24 << level);
            let n_theta = (4 * n as usize + 8) << level;
            let dth = 2.0 * PI / n_theta as f64;
            let mut acc = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                let psi = 0.25 * PI * (xi + 1.0);
                let (s, c) = psi.sin_cos();
                let weight = 0.25 * PI * wi * s * c;
                let t = s / c;
                let h = c.powi(2 * n);
                for k in 0..n_theta {
                    let z = Complex64::from_polar(t, k as f64 * dth);
                    let prod: f64 = zeros.iter().map(|zj| (z - zj).norm_sqr()).product();
                    acc += weight * dth * prod * h;
                }
            }
            acc
        },
        1e-12,
        1e-300,
        5,
    )
}

/// `|Delta(zeta)|^2 / I(zeta)^{N+1}`, normalising constant omitted.
pub fn joint_zero_density_unnormalized(zeros: &[Complex64]) -> Result<f64> {
    let inner = inner_integral(zeros)?;
    Ok(vandermonde_sq(zeros) / inner.powi(zeros.len() as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_zero_is_fubini_study_uniform() {
        let a = joint_zero_density_unnormalized(&[c(0.0, 0.0)]).unwrap();
        let b = joint_zero_density_unnormalized(&[c(1.0, 0.0)]).unwrap();
        assert!((a / b - 4.0).abs() < 1e-13);
        let z = c(0.3, -2.0);
        let d = joint_zero_density_unnormalized(&[z]).unwrap();
        assert!((d * (1.0 + z.norm_sqr()).powi(2) - a).abs() < 1e-12 * a);
    }

    #[test]
    fn exact_inner_integral_matches_quadrature() {
        let sets = [
            vec![c(0.4, 0.1)],
            vec![c(0.0, 0.0), c(1.0, -0.5)],
            vec![c(0.2, 0.3), c(-1.1, 0.4), c(2.0, 2.0), c(0.0, -0.7)],
        ];
        for zs in &sets {
            let a = inner_integral(zs).unwrap();
            let b = inner_integral_quadrature(zs).unwrap();
            assert!((a / b - 1.0).abs() < 1e-10, "{zs:?}: {a} {b}");
        }
    }

    #[test]
    fn coincident_zeros_vanish() {
        assert_eq!(joint_zero_density_unnormalized(&[c(0.5, 0.5), c(0.5, 0.5)]).unwrap(), 0.0);
    }

    #[test]
    fn rotation_and_permutation_invariance() {
        let zs = [c(0.3, 0.1), c(-0.8, 0.6), c(1.5, -0.2)];
        let base = joint_zero_density_unnormalized(&zs).unwrap();
        for k in 0..7 {
            let rot = Complex64::from_polar(1.0, 0.9 * k as f64);
            let rz: Vec<_> = zs.iter().map(|z| z * rot).collect();
            let v = joint_zero_density_unnormalized(&rz).unwrap();
            assert!((v / base - 1.0).abs() < 1e-8);
        }
        let perm = [zs[2], zs[0], zs[1]];
        assert!((joint_zero_density_unnormalized(&perm).unwrap() / base - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_or_infinite_input() {
        assert!(joint_zero_density_unnormalized(&vec![c(0.1, 0.0); 13]).is_err());
        assert!(joint_zero_density_unnormalized(&[c(f64::INFINITY, 0.0)]).is_err());
    }
}
