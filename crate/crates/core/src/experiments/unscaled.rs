//! Convergence of `N * correction` to its limit over a sweep of degrees.

use std::f64::consts::PI;

use super::config::{ExperimentConfig, ExperimentKind};
use super::result::{Check, ExperimentResult, Table};
use crate::densities::{flat_log_integral, unscaled_correction, unscaled_correction_multi, unscaled_target};
use crate::ensembles::EnsembleSpec;
use crate::error::{Error, Result};

/// Least-squares slope and intercept of `y` against `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn run_unscaled_sweep(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.experiment != ExperimentKind::UnscaledSweep {
        return Err(Error::Config("run_unscaled_sweep needs experiment = unscaled_sweep".into()));
    }
    let p = cfg.base_point;
    let phi = &cfg.test_function;
    let mut degrees = cfg.n_sweep.clone();
    degrees.sort_unstable();
    degrees.dedup();

    let mut table = Table {
        columns: ["N", "n_correction", "target", "abs_error", "n_correction_null"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: vec![],
    };
    let mut errs = Vec::new();
    let mut nulls = Vec::new();
    let mut target = 0.0;
    for &n in &degrees {
        let spec = EnsembleSpec::projective_line(n)?;
        let nc = n as f64 * unscaled_correction(&spec, p, phi)?;
        target = unscaled_target(&spec, p, phi)?;
        let null = match &cfg.null_test_function {
            Some(f) => Some(n as f64 * unscaled_correction(&spec, p, f)?),
            None => None,
        };
        errs.push((nc - target).abs());
        nulls.extend(null);
        table.rows.push(vec![Some(n as f64), Some(nc), Some(target), Some((nc - target).abs()), null]);
    }

    let mut res = ExperimentResult::new(cfg.clone());
    if degrees.len() >= 2 {
        if errs.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::Config("remainder vanished at some N; exponent fit undefined".into()));
        }
        let lx: Vec<f64> = degrees.iter().map(|&n| (n as f64).ln()).collect();
        let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (slope, icpt) = fit_line(&lx, &ly);
        let exponent = -slope;
        res.push_scalar("decay_exponent", exponent, 0.0);
        res.push_scalar("decay_prefactor", icpt.exp(), 0.0);
        let [lo, hi] = cfg.exponent_window;
        res.checks.push(Check::within(
            "decay_exponent",
            exponent,
            0.5 * (lo + hi),
            0.5 * (hi - lo),
            format!("fitted |N corr - target| ~ C N^-a, a in [{lo}, {hi}]"),
        ));
        res.checks.push(Check::flag(
            "remainder_decreasing",
            errs.windows(2).all(|w| w[1] < w[0]),
            errs[errs.len() - 1],
            "|N corr - target| decreases along the sweep",
        ));
    }
    res.push_scalar("target", target, 0.0);
    if let Some(&last) = nulls.last() {
        res.checks.push(Check::within(
            "null_laplacian",
            last,
            0.0,
            1e-2 * target.abs().max(1e-12),
            "N corr at the largest N for a test function with zero Laplacian at p",
        ));
    }
    if !cfg.extra_points.is_empty() {
        let n = *degrees.last().unwrap();
        let spec = EnsembleSpec::projective_line(n)?;
        let mut points = vec![p];
        points.extend(cfg.extra_points.iter().copied());
        let multi = unscaled_correction_multi(&spec, &points, phi)?;
        let mut singles = 0.0;
        for &q in &points {
            singles += unscaled_correction(&spec, q, phi)?;
        }
        let rel = (multi - singles).abs() / singles.abs();
        res.push_scalar("multi_point_correction", multi, 0.0);
        res.push_scalar("sum_of_single_corrections", singles, 0.0);
        res.checks.push(Check::within(
            "multi_point_additivity",
            rel,
            0.0,
            cfg.multi_point_tolerance,
            format!("relative difference at N={n}"),
        ));
    }
    let flat = flat_log_integral()?;
    res.push_scalar("flat_log_integral", flat, 0.0);
    res.checks.push(Check::within(
        "flat_log_integral",
        flat,
        -PI.powi(3) / 6.0,
        1e-8,
        "int log(1 - exp(-|u|^2)) dA = -pi^3/6",
    ));
    res.table = Some(table);
    Ok(res.finish())
}
