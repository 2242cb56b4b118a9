//! Experiment configuration: one flat JSON document, every field defaulted
//! per experiment and echoed back in the summary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensembles::{EnsembleSpec, Model};
use crate::error::{Error, Result};
use crate::test_functions::TestFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    CondDensity,
    PairCorr,
    UnscaledSweep,
    VarianceCheck,
    JointDensitySmallN,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::CondDensity,
        ExperimentKind::PairCorr,
        ExperimentKind::UnscaledSweep,
        ExperimentKind::VarianceCheck,
        ExperimentKind::JointDensitySmallN,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::CondDensity => "cond_density",
            ExperimentKind::PairCorr => "pair_corr",
            ExperimentKind::UnscaledSweep => "unscaled_sweep",
            ExperimentKind::VarianceCheck => "variance_check",
            ExperimentKind::JointDensitySmallN => "joint_density_small_n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    ProjectiveLine,
    BargmannFock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: ModelKind,
    /// Degree `N`, or the truncation order for Bargmann-Fock.
    pub degree: u32,
    pub trials: u64,
    pub master_seed: u64,
    pub base_point: Complex64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_bins: usize,
    /// Degrees for the unscaled sweep.
    pub n_sweep: Vec<u32>,
    /// Further conditioning points for the multi-point unscaled check.
    pub extra_points: Vec<Complex64>,
    pub test_function: TestFunction,
    /// Companion test function with vanishing Laplacian at the base point.
    pub null_test_function: Option<TestFunction>,
    /// Fubini-Study radius of the bins around each joint configuration point.
    pub joint_radius: f64,
    /// Pair-correlation window in scaled units is this times `sqrt(log N)`.
    pub pair_window_factor: f64,
    /// Trials per work unit; results do not depend on it or on thread count.
    pub chunk_size: u64,
    /// Bins with fewer hits are reported but not scored.
    pub occupancy_floor: u64,
    pub z_threshold: f64,
    pub rel_err_threshold: f64,
    pub rel_err_min_hits: u64,
    /// Scaled-radius ranges for the near-origin, probe and far-field checks.
    pub near_range: [f64; 2],
    pub near_tolerance: f64,
    pub probe_range: [f64; 2],
    pub probe_tolerance: f64,
    pub far_range: [f64; 2],
    pub far_tolerance: f64,
    /// Accepted empirical decay exponents of the unscaled remainder.
    pub exponent_window: [f64; 2],
    pub multi_point_tolerance: f64,
}

impl ExperimentConfig {
    /// Defaults for `kind`.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let mut cfg = ExperimentConfig {
            experiment: kind,
            model: ModelKind::ProjectiveLine,
            degree: 100,
            trials: 100_000,
            master_seed: 7,
            base_point: zero,
            r_min: 0.2,
            r_max: 3.0,
            n_bins: 56,
            n_sweep: vec![],
            extra_points: vec![],
            test_function: TestFunction::bump(zero, 0.5),
            null_test_function: None,
            joint_radius: 0.2,
            pair_window_factor: 0.5,
            chunk_size: 500,
            occupancy_floor: 100,
            z_threshold: 4.0,
            rel_err_threshold: 0.05,
            rel_err_min_hits: 10_000,
            near_range: [0.2, 0.4],
            near_tolerance: 0.1,
            probe_range: [0.25, 0.35],
            probe_tolerance: 0.1,
            far_range: [2.5, 3.0],
            far_tolerance: 0.02,
            exponent_window: [0.4, 1.1],
            multi_point_tolerance: 0.01,
        };
        match kind {
            ExperimentKind::CondDensity => {}
            ExperimentKind::PairCorr => cfg.far_tolerance = 0.03,
            ExperimentKind::UnscaledSweep => {
                cfg.trials = 1;
                cfg.n_sweep = vec![50, 100, 200, 400];
                cfg.extra_points = vec![Complex64::new(2.0, 1.0)];
                cfg.test_function = TestFunction::Sum {
                    terms: vec![
                        TestFunction::bump(zero, 0.5),
                        TestFunction::bump(Complex64::new(2.0, 1.0), 0.3),
                    ],
                };
                cfg.null_test_function = Some(TestFunction::QuadrupoleBump {
                    center: zero,
                    width: 0.5,
                    amplitude: 1.0,
                });
            }
            ExperimentKind::VarianceCheck => {
                cfg.degree = 50;
                cfg.z_threshold = 3.0;
            }
            ExperimentKind::JointDensitySmallN => {
                cfg.degree = 1;
                cfg.trials = 1_000_000;
                cfg.z_threshold = 3.0;
                cfg.rel_err_threshold = 0.05;
            }
        }
        cfg
    }

    /// Parse a JSON document. Missing fields take the defaults of the named
    /// experiment (`cond_density` when absent); unknown fields are errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_value(v, None)
    }

    /// As [`from_json`](Self::from_json), with `kind` overriding the document.
    pub fn from_value(v: Value, kind: Option<ExperimentKind>) -> Result<Self> {
        let Value::Object(overrides) = v else {
            return Err(Error::Config("configuration must be a JSON object".into()));
        };
        let kind = match (kind, overrides.get("experiment")) {
            (Some(k), _) => k,
            (None, Some(e)) => serde_json::from_value(e.clone())?,
            (None, None) => ExperimentKind::CondDensity,
        };
        let Value::Object(mut merged) = serde_json::to_value(Self::defaults(kind))? else {
            unreachable!("config serialises to an object");
        };
        for (k, val) in overrides {
            merged.insert(k, val);
        }
        merged.insert("experiment".into(), serde_json::to_value(kind)?);
        let cfg: Self = serde_json::from_value(Value::Object(merged))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn ensemble(&self) -> Result<EnsembleSpec> {
        EnsembleSpec::new(match self.model {
            ModelKind::ProjectiveLine => Model::ProjectiveLine { degree: self.degree },
            ModelKind::BargmannFock => Model::BargmannFock { truncation: self.degree },
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.chunk_size < 1 {
            return bad("chunk_size must be at least 1".into());
        }
        if !(self.base_point.re.is_finite() && self.base_point.im.is_finite()) {
            return bad("base_point must be finite".into());
        }
        let density = matches!(self.experiment, ExperimentKind::CondDensity | ExperimentKind::PairCorr);
        if density {
            if !(self.r_min > 0.0) {
                return bad(format!("r_min must be positive for density experiments, got {}", self.r_min));
            }
            if !(self.r_max > self.r_min) || self.n_bins < 1 {
                return bad(format!(
                    "bad bin spec r_min={}, r_max={}, n_bins={}",
                    self.r_min, self.r_max, self.n_bins
                ));
            }
        }
        match self.experiment {
            ExperimentKind::UnscaledSweep => {
                if self.n_sweep.len() < 2 || !self.n_sweep.windows(2).all(|w| w[0] < w[1]) {
                    return bad(format!("n_sweep needs at least two increasing degrees, got {:?}", self.n_sweep));
                }
                for &n in &self.n_sweep {
                    EnsembleSpec::projective_line(n)?;
                }
                if self.model != ModelKind::ProjectiveLine {
                    return bad("the unscaled sweep runs on the projective line".into());
                }
            }
            ExperimentKind::JointDensitySmallN => {
                if !(1..=4).contains(&self.degree) || self.model != ModelKind::ProjectiveLine {
                    return bad(format!("joint density needs the projective line with N <= 4, got N={}", self.degree));
                }
                if !(self.joint_radius > 0.0 && self.joint_radius < 0.3) {
                    return bad("joint_radius must lie in (0, 0.3)".into());
                }
            }
            _ => {}
        }
        if self.experiment != ExperimentKind::UnscaledSweep {
            self.ensemble()?;
        }
        Ok(())
    }
}
