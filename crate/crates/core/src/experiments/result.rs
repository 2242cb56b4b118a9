//! Experiment outputs.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::numerics::RadialCurve;

pub const CODE_VERSION: &str = concat!("zerocond ", env!("CARGO_PKG_VERSION"));

/// One pass/fail comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    /// Allowed `|observed - expected|` (or window half-width, see `detail`).
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn within(name: &str, observed: f64, expected: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            observed,
            expected,
            tolerance,
            passed: (observed - expected).abs() <= tolerance,
            detail: detail.into(),
        }
    }

    pub fn flag(name: &str, passed: bool, observed: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            observed,
            expected: 0.0,
            tolerance: 0.0,
            passed,
            detail: detail.into(),
        }
    }
}

/// A named estimate with its standard error (zero for exact values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scalar {
    pub name: String,
    pub value: f64,
    pub std_err: f64,
}

/// Rows of numbers; `None` cells are written as empty fields.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub code_version: String,
    pub curve: Option<RadialCurve>,
    /// Bin-averaged theory on the curve's grid.
    pub theory_curve: Option<Vec<f64>>,
    pub z_scores: Option<Vec<Option<f64>>>,
    pub table: Option<Table>,
    pub scalars: Vec<Scalar>,
    pub checks: Vec<Check>,
    /// Over scored bins (or comparisons); zero when there are none.
    pub max_abs_z_score: f64,
    pub passed: bool,
    /// Wall-clock time; kept out of the summary so reruns are byte-identical.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ExperimentResult {
    pub fn new(config: ExperimentConfig) -> Self {
        ExperimentResult {
            config,
            code_version: CODE_VERSION.into(),
            curve: None,
            theory_curve: None,
            z_scores: None,
            table: None,
            scalars: vec![],
            checks: vec![],
            max_abs_z_score: 0.0,
            passed: false,
            runtime_seconds: 0.0,
        }
    }

    pub fn scalar(&self, name: &str) -> Option<&Scalar> {
        self.scalars.iter().find(|s| s.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn push_scalar(&mut self, name: &str, value: f64, std_err: f64) {
        self.scalars.push(Scalar {
            name: name.into(),
            value,
            std_err,
        });
    }

    pub(crate) fn finish(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }
}
