//! Monte Carlo and quadrature experiments.
//!
//! Trials are split into fixed-size chunks keyed by trial index, run on the
//! rayon pool, and merged in chunk order, so results are bit-identical for
//! any number of workers. `ZEROCOND_THREADS` sets the worker count.

mod cond_density;
pub mod config;
mod joint;
mod pair_corr;
pub mod result;
mod unscaled;
mod variance;

use std::time::Instant;

use rayon::prelude::*;

pub use cond_density::run_cond_density;
pub use config::{ExperimentConfig, ExperimentKind, ModelKind};
pub use joint::run_joint_density_small_n;
pub use pair_corr::run_pair_corr;
pub use result::{Check, ExperimentResult, Scalar, Table, CODE_VERSION};
pub use unscaled::{fit_line, run_unscaled_sweep};
pub use variance::run_variance_check;

use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::{RadialCurve, RadialHistogram, StreamingStat};

pub const THREADS_ENV: &str = "ZEROCOND_THREADS";

/// Run the experiment named in `cfg`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let mut result = with_worker_pool(|| match cfg.experiment {
        ExperimentKind::CondDensity => run_cond_density(cfg),
        ExperimentKind::PairCorr => run_pair_corr(cfg),
        ExperimentKind::UnscaledSweep => run_unscaled_sweep(cfg),
        ExperimentKind::VarianceCheck => run_variance_check(cfg),
        ExperimentKind::JointDensitySmallN => run_joint_density_small_n(cfg),
    })?;
    result.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(result)
}

/// Worker count from `ZEROCOND_THREADS`, if set.
pub fn worker_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn with_worker_pool<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match worker_threads()? {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?
            .install(f),
    }
}

/// Run `step` for every trial, one accumulator per chunk, and return the
/// accumulators in chunk order. Errors carry the trial index.
pub(crate) fn run_chunked<A, I, F>(trials: u64, chunk: u64, init: I, step: F) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) -> Result<()> + Sync,
{
    let n_chunks = trials.div_ceil(chunk);
    let parts: Vec<Result<A>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for t in c * chunk..((c + 1) * chunk).min(trials) {
                step(&mut acc, t).map_err(|e| e.in_trial(t))?;
            }
            Ok(acc)
        })
        .collect();
    parts.into_iter().collect()
}

/// Scaled area of the disc of scaled radius `r`: `N pi sin^2(r / sqrt N)`
/// on the projective line, `pi r^2` for Bargmann-Fock.
pub fn scaled_disc_area(spec: &EnsembleSpec, r: f64) -> f64 {
    if spec.is_projective() {
        let s = spec.length_scale();
        let d = (r / s).min(0.5 * std::f64::consts::PI);
        s * s * std::f64::consts::PI * d.sin().powi(2)
    } else {
        std::f64::consts::PI * r * r
    }
}

/// Average of `f` over the scaled annulus `lo <= r < hi`.
pub fn annulus_average(spec: &EnsembleSpec, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(24);
    let s = spec.length_scale();
    let weight = |r: f64| {
        if spec.is_projective() {
            (2.0 * r / s).sin()
        } else {
            r
        }
    };
    let (mut num, mut den) = (0.0, 0.0);
    for (xi, wi) in x.iter().zip(&w) {
        let r = lo + 0.5 * (hi - lo) * (xi + 1.0);
        let m = wi * weight(r);
        num += m * f(r);
        den += m;
    }
    num / den
}

/// Per-trial counts in the annuli of a histogram and in extra named ranges.
#[derive(Debug, Clone)]
pub(crate) struct RadialAccumulator {
    pub hist: RadialHistogram,
    pub ranges: Vec<[f64; 2]>,
    pub range_counts: Vec<StreamingStat>,
}

impl RadialAccumulator {
    pub fn new(edges: Vec<f64>, ranges: Vec<[f64; 2]>) -> Self {
        let n = ranges.len();
        RadialAccumulator {
            hist: RadialHistogram::new(edges),
            ranges,
            range_counts: vec![StreamingStat::new(); n],
        }
    }

    pub fn record_trial(&mut self, radii: &[f64]) {
        self.hist.record_trial(radii.iter().copied());
        for (k, [lo, hi]) in self.ranges.iter().enumerate() {
            let c = radii.iter().filter(|&&r| r >= *lo && r < *hi).count();
            self.range_counts[k].push(c as f64);
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.hist.merge(&other.hist);
        for (a, b) in self.range_counts.iter_mut().zip(&other.range_counts) {
            a.merge(b);
        }
    }
}

/// Curve against bin-averaged theory: z-scores for every bin with hits and
/// the largest `|z|` over bins with at least `floor` hits.
pub(crate) fn score_curve(curve: &RadialCurve, theory: &[f64], floor: u64) -> (Vec<Option<f64>>, f64) {
    let mut max_z: f64 = 0.0;
    let z: Vec<Option<f64>> = (0..curve.n_bins())
        .map(|i| match curve.value[i] {
            Some(v) if curve.std_err[i] > 0.0 => {
                let z = (v - theory[i]) / curve.std_err[i];
                if curve.samples_per_bin[i] >= floor {
                    max_z = max_z.max(z.abs());
                }
                Some(z)
            }
            _ => None,
        })
        .collect();
    (z, max_z)
}

/// Largest relative error over bins with at least `min_hits` hits;
/// `None` when no bin qualifies.
pub(crate) fn max_rel_err(curve: &RadialCurve, theory: &[f64], min_hits: u64) -> Option<f64> {
    (0..curve.n_bins())
        .filter(|&i| curve.samples_per_bin[i] >= min_hits)
        .filter_map(|i| curve.value[i].map(|v| (v / theory[i] - 1.0).abs()))
        .reduce(f64::max)
}
