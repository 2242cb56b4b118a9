//! Smooth test functions with analytic Euclidean Laplacians.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Test functions paired against zero currents.
///
/// The Gaussian bumps are not compactly supported; beyond
/// [`TestFunction::support_radius`] they are below `e^{-49}` of their peak
/// and are treated as zero by the quadratures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `A exp(-|z-c|^2 / sigma^2)`
    GaussianBump {
        center: Complex64,
        width: f64,
        amplitude: f64,
    },
    /// `A Re((z-c)^2) exp(-|z-c|^2 / sigma^2)`, Laplacian zero at `c`.
    QuadrupoleBump {
        center: Complex64,
        width: f64,
        amplitude: f64,
    },
    Constant { value: f64 },
    Sum { terms: Vec<TestFunction> },
}

const SUPPORT_WIDTHS: f64 = 7.0;

impl TestFunction {
    pub fn bump(center: Complex64, width: f64) -> Self {
        TestFunction::GaussianBump {
            center,
            width,
            amplitude: 1.0,
        }
    }

    pub fn value(&self, z: Complex64) -> f64 {
        match self {
            TestFunction::GaussianBump {
                center,
                width,
                amplitude,
            } => amplitude * (-(z - center).norm_sqr() / (width * width)).exp(),
            TestFunction::QuadrupoleBump {
                center,
                width,
                amplitude,
            } => {
                let w = z - center;
                amplitude * (w * w).re * (-w.norm_sqr() / (width * width)).exp()
            }
            TestFunction::Constant { value } => *value,
            TestFunction::Sum { terms } => terms.iter().map(|t| t.value(z)).sum(),
        }
    }

    /// Limit at the point at infinity of the projective line.
    pub fn value_at_infinity(&self) -> f64 {
        match self {
            TestFunction::Constant { value } => *value,
            TestFunction::Sum { terms } => terms.iter().map(|t| t.value_at_infinity()).sum(),
            _ => 0.0,
        }
    }

    /// Euclidean Laplacian `(d_x^2 + d_y^2) phi`.
    pub fn laplacian(&self, z: Complex64) -> f64 {
        match self {
            TestFunction::GaussianBump {
                center,
                width,
                amplitude,
            } => {
                let s2 = width * width;
                let rho2 = (z - center).norm_sqr();
                amplitude * 4.0 / s2 * (rho2 / s2 - 1.0) * (-rho2 / s2).exp()
            }
            TestFunction::QuadrupoleBump {
                center,
                width,
                amplitude,
            } => {
                let s2 = width * width;
                let w = z - center;
                let rho2 = w.norm_sqr();
                amplitude * (w * w).re * 4.0 / s2 * (rho2 / s2 - 3.0) * (-rho2 / s2).exp()
            }
            TestFunction::Constant { .. } => 0.0,
            TestFunction::Sum { terms } => terms.iter().map(|t| t.laplacian(z)).sum(),
        }
    }

    /// Fubini-Study Laplacian `(1+|z|^2)^2` times the Euclidean one.
    pub fn fs_laplacian(&self, z: Complex64) -> f64 {
        (1.0 + z.norm_sqr()).powi(2) * self.laplacian(z)
    }

    /// Discs outside which the Laplacian is negligible, `(center, radius)`.
    /// Empty for constants.
    pub fn support(&self) -> Vec<(Complex64, f64)> {
        match self {
            TestFunction::GaussianBump { center, width, .. }
            | TestFunction::QuadrupoleBump { center, width, .. } => {
                vec![(*center, SUPPORT_WIDTHS * width)]
            }
            TestFunction::Constant { .. } => Vec::new(),
            TestFunction::Sum { terms } => terms.iter().flat_map(|t| t.support()).collect(),
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support().iter().map(|s| s.1).fold(0.0, f64::max)
    }

    /// The same function multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            TestFunction::GaussianBump {
                center,
                width,
                amplitude,
            } => TestFunction::GaussianBump {
                center: *center,
                width: *width,
                amplitude: amplitude * k,
            },
            TestFunction::QuadrupoleBump {
                center,
                width,
                amplitude,
            } => TestFunction::QuadrupoleBump {
                center: *center,
                width: *width,
                amplitude: amplitude * k,
            },
            TestFunction::Constant { value } => TestFunction::Constant { value: value * k },
            TestFunction::Sum { terms } => TestFunction::Sum {
                terms: terms.iter().map(|t| t.scaled(k)).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_laplacian(f: &TestFunction, z: Complex64) -> f64 {
        let h = 1e-4;
        let e = |dz: Complex64| f.value(z + dz);
        (e(Complex64::new(h, 0.0)) + e(Complex64::new(-h, 0.0)) + e(Complex64::new(0.0, h))
            + e(Complex64::new(0.0, -h))
            - 4.0 * f.value(z))
            / (h * h)
    }

    #[test]
    fn laplacians_match_finite_differences() {
        let fs = [
            TestFunction::bump(Complex64::new(0.2, -0.1), 0.7),
            TestFunction::QuadrupoleBump {
                center: Complex64::new(-0.3, 0.4),
                width: 0.5,
                amplitude: 2.0,
            },
            TestFunction::Sum {
                terms: vec![
                    TestFunction::bump(Complex64::new(0.0, 0.0), 1.0),
                    TestFunction::Constant { value: 3.0 },
                ],
            },
        ];
        for f in &fs {
            for &z in &[Complex64::new(0.1, 0.2), Complex64::new(-0.5, 0.9), Complex64::new(0.7, -0.3)] {
                let d = (f.laplacian(z) - fd_laplacian(f, z)).abs();
                assert!(d < 1e-5 * (1.0 + f.laplacian(z).abs()), "{f:?} {z}");
            }
        }
    }

    #[test]
    fn quadrupole_is_flat_at_centre() {
        let c = Complex64::new(0.3, 0.3);
        let q = TestFunction::QuadrupoleBump {
            center: c,
            width: 0.4,
            amplitude: 1.0,
        };
        assert_eq!(q.laplacian(c), 0.0);
    }

    #[test]
    fn scaling_is_linear() {
        let f = TestFunction::bump(Complex64::new(0.1, 0.0), 0.3);
        let z = Complex64::new(0.2, 0.1);
        assert!((f.scaled(2.0).laplacian(z) - 2.0 * f.laplacian(z)).abs() < 1e-14);
    }
}
