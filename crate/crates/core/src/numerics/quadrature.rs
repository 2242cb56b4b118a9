//! Gauss-Legendre rules, graded radial panels and polar tensor grids.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A Gauss-Legendre rule mapped onto a union of panels.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(panels: &[(f64, f64)], order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(panels.len() * order);
        let mut weights = Vec::with_capacity(panels.len() * order);
        for &(a, b) in panels {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Panels on `[0, r_max]`: `uniform` equal panels, with the first one
/// further split geometrically toward zero `grading` times (ratio 1/4).
/// Handles integrable `log r` singularities at the origin.
pub fn graded_panels(r_max: f64, uniform: usize, grading: usize) -> Vec<(f64, f64)> {
    let h = r_max / uniform as f64;
    let mut panels = Vec::with_capacity(uniform + grading);
    let mut lo = h;
    let mut inner = Vec::with_capacity(grading + 1);
    for _ in 0..grading {
        let next = lo * 0.25;
        inner.push((next, lo));
        lo = next;
    }
    inner.push((0.0, lo));
    inner.reverse();
    panels.extend(inner);
    for k in 1..uniform {
        panels.push((h * k as f64, h * (k + 1) as f64));
    }
    panels
}

/// Refine `estimate(level)` for `level = 0, 1, ...` until two successive
/// values agree to `rel_tol` (relative, with `abs_floor` as the absolute
/// floor).
pub fn refine_until(
    mut estimate: impl FnMut(usize) -> f64,
    rel_tol: f64,
    abs_floor: f64,
    max_level: usize,
) -> Result<f64> {
    let mut prev = estimate(0);
    for level in 1..=max_level {
        let cur = estimate(level);
        if !cur.is_finite() {
            return Err(Error::Quadrature {
                msg: format!("non-finite estimate at level {level}"),
                previous: prev,
                current: cur,
            });
        }
        if (cur - prev).abs() <= rel_tol * cur.abs().max(abs_floor) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        msg: format!("no agreement to {rel_tol:e} after {max_level} refinements"),
        previous: prev,
        current: estimate(max_level),
    })
}

/// Tensor rule in polar coordinates around a centre: Gauss-Legendre in the
/// radius, trapezoid (spectral for periodic integrands) in the angle.
#[derive(Debug, Clone)]
pub struct PolarRule {
    pub radial: PanelRule,
    pub n_theta: usize,
}

impl PolarRule {
    pub fn new(r_max: f64, uniform: usize, grading: usize, order: usize, n_theta: usize) -> Self {
        Self {
            radial: PanelRule::new(&graded_panels(r_max, uniform, grading), order),
            n_theta,
        }
    }

    /// Nodes `(point, weight)` with the area element `r dr dtheta` folded in.
    pub fn nodes(&self, center: Complex64) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let dth = 2.0 * PI / self.n_theta as f64;
        self.radial
            .nodes
            .iter()
            .zip(&self.radial.weights)
            .flat_map(move |(&r, &w)| {
                (0..self.n_theta).map(move |k| {
                    let th = (k as f64 + 0.5) * dth;
                    (center + Complex64::from_polar(r, th), w * r * dth)
                })
            })
    }

    pub fn integrate(&self, center: Complex64, mut f: impl FnMut(Complex64) -> f64) -> f64 {
        self.nodes(center).map(|(z, w)| w * f(z)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 12, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((approx - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn graded_rule_handles_log_singularity() {
        // int_0^1 r ln r dr = -1/4
        let rule = PanelRule::new(&graded_panels(1.0, 4, 12), 16);
        let v = rule.integrate(|r| if r > 0.0 { r * r.ln() } else { 0.0 });
        assert!((v + 0.25).abs() < 1e-13, "{v}");
    }

    #[test]
    fn polar_rule_area_of_disc() {
        let rule = PolarRule::new(2.0, 2, 0, 8, 16);
        let a = rule.integrate(Complex64::new(0.3, -1.0), |_| 1.0);
        assert!((a - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn refine_reports_failure() {
        let r = refine_until(|l| l as f64, 1e-8, 1.0, 3);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
        let ok = refine_until(|l| 1.0 + 0.5f64.powi(40 * l as i32), 1e-8, 1.0, 3).unwrap();
        assert!((ok - 1.0).abs() < 1e-10);
    }
}
