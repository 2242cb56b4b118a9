//! Dilogarithm and integer zeta values.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2_OVER_6: f64 = PI * PI / 6.0;

/// `Li_2(x) = sum_{n>=1} x^n / n^2` on `[0, 1]`.
///
/// Direct series up to `x = 1/2`, Euler reflection
/// `Li_2(x) = pi^2/6 - ln(x) ln(1-x) - Li_2(1-x)` above it, so the series
/// argument never exceeds one half.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("dilog", format!("argument {x} outside [0, 1]")));
    }
    Ok(dilog_unchecked(x))
}

/// [`dilog`] without the domain check; callers guarantee `0 <= x <= 1`.
pub(crate) fn dilog_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return PI2_OVER_6;
    }
    if x <= 0.5 {
        dilog_series(x)
    } else {
        let y = 1.0 - x; // exact for x >= 1/2
        PI2_OVER_6 - (-y).ln_1p() * y.ln() - dilog_series(y)
    }
}

fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = x;
    let mut n = 1.0_f64;
    loop {
        let term = pow / (n * n);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        pow *= x;
        n += 1.0;
    }
    sum
}

// B_{2k} / (2k)! for k = 1..5
const EM_COEFFS: [f64; 5] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
];

/// Riemann zeta at an integer `s >= 2`.
///
/// Partial sum to `M - 1` followed by an Euler-Maclaurin tail from `M = 20`.
pub fn zeta_value(s: u32) -> Result<f64> {
    if s < 2 {
        return Err(Error::domain("zeta_value", format!("s = {s} < 2")));
    }
    if s > 60 {
        // 2^-61 is below half an ulp of 1
        return Ok(1.0 + 0.5f64.powi(s as i32));
    }
    const M: u32 = 20;
    let sf = s as f64;
    let mut sum = 0.0;
    for n in (1..M).rev() {
        sum += (n as f64).powf(-sf);
    }
    let m = M as f64;
    let mut tail = m.powf(1.0 - sf) / (sf - 1.0) + 0.5 * m.powf(-sf);
    // f^{(2k-1)}(M) = -s(s+1)...(s+2k-2) M^{-s-2k+1}
    let mut rising = sf;
    for (k, c) in EM_COEFFS.iter().enumerate() {
        let order = (2 * k + 1) as f64;
        tail += c * rising * m.powf(-sf - order);
        rising *= (sf + order) * (sf + order + 1.0);
    }
    Ok(sum + tail)
}

/// `log(1 - e^{-x})` for `x > 0`, accurate at both ends.
pub fn log1mexp(x: f64) -> f64 {
    if x <= std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// Natural log of the binomial coefficient `C(n, k)`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `ln(n!)`, exact summation for small `n` and Stirling beyond.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 256 {
        (2..=n).map(|j| (j as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Gamma(x)
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        (x - 0.5) * x.ln() - x
            + 0.5 * (2.0 * PI).ln()
            + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
    }
}
