//! Scaling-limit densities around a conditioned zero.
//!
//! With `t = |u|^2` and `g(t) = log(1 - e^{-t}) + t`, the conditional zero
//! current in the limit is `(i/2pi ddbar g(|u|^2))^k` plus the point mass.
//! Its complex Hessian has eigenvalue `g'(t)` (multiplicity `m-1`, tangent
//! to the sphere) and `g'(t) + t g''(t)` (radial).

use crate::error::{Error, Result};
use crate::numerics::special::log1mexp;
use crate::numerics::tolerances::KAPPA_SERIES_CUTOFF;

/// `g`, `g'`, `g''` at `t = r^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub t: f64,
}

impl RadialProfile {
    pub fn at_radius(r: f64) -> Self {
        Self { t: r * r }
    }

    pub fn g(&self) -> f64 {
        log1mexp(self.t) + self.t
    }

    /// `1 / (1 - e^{-t})`
    pub fn g1(&self) -> f64 {
        -1.0 / (-self.t).exp_m1()
    }

    /// `-e^{-t} / (1 - e^{-t})^2`
    pub fn g2(&self) -> f64 {
        let d = (-self.t).exp_m1();
        -(-self.t).exp() / (d * d)
    }

    /// `g' + t g''` without cancellation.
    pub fn radial_eigenvalue(&self) -> f64 {
        let d = (-self.t).exp_m1();
        kappa_numerator(self.t) / (d * d)
    }
}

/// `1 - (1+t) e^{-t}`.
///
/// Four Taylor terms below the cutoff, the full series up to `t = 1/2`, the
/// closed form above.
pub fn kappa_numerator(t: f64) -> f64 {
    if t < KAPPA_SERIES_CUTOFF {
        return t * t * (0.5 - t * (1.0 / 3.0 - t * (1.0 / 8.0 - t / 30.0)));
    }
    if t < 0.5 {
        // coefficient of t^n is (-1)^n (n-1)/n!
        let mut sum = 0.0;
        let mut pow_over_fact = t * t / 2.0;
        let mut n = 2u32;
        loop {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let term = sign * (n - 1) as f64 * pow_over_fact;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                return sum;
            }
            n += 1;
            pow_over_fact *= t / n as f64;
        }
    }
    -(-t).exp_m1() - t * (-t).exp()
}

/// `kappa_m^cond(r) = (1 - (1+r^2) e^{-r^2}) / (1 - e^{-r^2})^{m+1}`.
///
/// At `r = 0` this returns the limit: `1/2` for `m = 1`, infinity otherwise.
pub fn kappa_cond(m: u32, r: f64) -> f64 {
    let t = r * r;
    if t == 0.0 {
        return if m == 1 { 0.5 } else { f64::INFINITY };
    }
    let d = -(-t).exp_m1();
    kappa_numerator(t) / d.powi(m as i32 + 1)
}

/// Density of `K_km ^ omega_0^{m-k}` relative to `omega_0^m`:
/// `e_k(lambda) / C(m,k)` over the Hessian eigenvalues.
pub fn limit_density_kkm(m: u32, k: u32, r: f64) -> Result<f64> {
    if k < 1 || k > m {
        return Err(Error::domain("limit_density_kkm", format!("need 1 <= k <= m, got k={k}, m={m}")));
    }
    if r <= 0.0 {
        return Err(Error::domain("limit_density_kkm", format!("radius {r} must be positive")));
    }
    let prof = RadialProfile::at_radius(r);
    let tangent = prof.g1();
    let radial = prof.radial_eigenvalue();
    let choose = |n: u32, j: u32| -> f64 {
        if j > n {
            return 0.0;
        }
        (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    };
    let ek = choose(m - 1, k) * tangent.powi(k as i32)
        + choose(m - 1, k - 1) * tangent.powi(k as i32 - 1) * radial;
    Ok(ek / choose(m, k))
}

/// Bargmann-Fock two-point function `kappa_11(r)` for `m = 1`, with `v = r^2/2`:
/// `((sinh^2 v + v^2) cosh v - 2 v sinh v) / sinh^3 v`.
pub fn pair_correlation_limit(r: f64) -> f64 {
    let v = 0.5 * r * r;
    if v < 0.2 {
        let v2 = v * v;
        return v
            * (1.0
                + v2 * (-2.0 / 9.0
                    + v2 * (2.0 / 45.0
                        + v2 * (-4.0 / 525.0 + v2 * (2.0 / 1701.0 - v2 * 2764.0 / 16372125.0)))));
    }
    if v > 40.0 {
        // deviations are O(v^2 e^{-2v}), below an ulp
        return 1.0;
    }
    let (s, c) = (v.sinh(), v.cosh());
    c / s + v * v * c / (s * s * s) - 2.0 * v / (s * s)
}
