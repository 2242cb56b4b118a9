//! Scaled pair correlation of unconditioned zeros near the base point.

use std::f64::consts::PI;

use super::config::{ExperimentConfig, ExperimentKind};
use super::result::{Check, ExperimentResult};
use super::{annulus_average, run_chunked, scaled_disc_area, score_curve, RadialAccumulator};
use crate::densities::{pair_correlation_finite_n, pair_correlation_limit};
use crate::ensembles::sample_section;
use crate::error::{Error, Result};
use crate::kernels::fs_distance;
use crate::numerics::{trial_rng, uniform_edges};
use crate::zeros::find_zeros;

struct Acc {
    radial: RadialAccumulator,
    roots: u64,
    in_window: u64,
    outside: u64,
    pairs: u64,
}

pub fn run_pair_corr(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.experiment != ExperimentKind::PairCorr {
        return Err(Error::Config("run_pair_corr needs experiment = pair_corr".into()));
    }
    let spec = cfg.ensemble()?;
    let p = cfg.base_point;
    let scale = spec.length_scale();
    let dist = |a, b| {
        if spec.is_projective() {
            scale * fs_distance(a, b)
        } else {
            (a - b).norm()
        }
    };
    // only first points inside this scaled radius of p
    let window = cfg.pair_window_factor * (spec.order() as f64).ln().max(0.0).sqrt();
    let edges = uniform_edges(cfg.r_min, cfg.r_max, cfg.n_bins)?;
    let ranges = vec![cfg.near_range, cfg.probe_range, cfg.far_range];

    let parts = run_chunked(
        cfg.trials,
        cfg.chunk_size,
        || Acc {
            radial: RadialAccumulator::new(edges.clone(), ranges.clone()),
            roots: 0,
            in_window: 0,
            outside: 0,
            pairs: 0,
        },
        |acc, t| {
            let mut rng = trial_rng(cfg.master_seed, t);
            let s = sample_section(&spec, &mut rng);
            let zs = find_zeros(&s, &spec)?;
            let roots = &zs.affine_roots;
            acc.roots += zs.total() as u64;
            acc.outside += zs.roots_at_infinity as u64;
            let mut seps = Vec::new();
            for (i, &a) in roots.iter().enumerate() {
                if dist(a, p) >= window {
                    acc.outside += 1;
                    continue;
                }
                acc.in_window += 1;
                for (j, &b) in roots.iter().enumerate() {
                    if i != j {
                        seps.push(dist(a, b));
                    }
                }
            }
            acc.pairs += seps.len() as u64;
            acc.radial.record_trial(&seps);
            Ok(())
        },
    )?;
    let mut it = parts.into_iter();
    let mut acc = it.next().expect("at least one chunk");
    for part in it {
        acc.radial.merge(&part.radial);
        acc.roots += part.roots;
        acc.in_window += part.in_window;
        acc.outside += part.outside;
        acc.pairs += part.pairs;
    }

    // expected pair count without correlation: (A_W / pi) (A_bin / pi)
    let area = |lo: f64, hi: f64| scaled_disc_area(&spec, hi) - scaled_disc_area(&spec, lo);
    let first = scaled_disc_area(&spec, window) / PI;
    let norm: Vec<f64> = edges.windows(2).map(|w| first * area(w[0], w[1]) / PI).collect();
    let curve = acc.radial.hist.curve(&norm);
    let theory: Vec<f64> = edges
        .windows(2)
        .map(|w| annulus_average(&spec, w[0], w[1], pair_correlation_limit))
        .collect();
    let (z, max_z) = score_curve(&curve, &theory, cfg.occupancy_floor);

    let mut res = ExperimentResult::new(cfg.clone());
    res.checks.push(Check::within(
        "bin_z_scores",
        max_z,
        0.0,
        cfg.z_threshold,
        format!("max |z| over bins with >= {} hits", cfg.occupancy_floor),
    ));
    for (k, name) in ["near", "probe", "far"].iter().enumerate() {
        let [lo, hi] = ranges[k];
        let stat = &acc.radial.range_counts[k];
        let a = first * area(lo, hi) / PI;
        res.push_scalar(&format!("{name}_kappa"), stat.mean / a, stat.std_err() / a);
        res.push_scalar(
            &format!("{name}_theory"),
            annulus_average(&spec, lo, hi, pair_correlation_limit),
            0.0,
        );
        res.push_scalar(
            &format!("{name}_theory_finite_n"),
            annulus_average(&spec, lo, hi, |r| pair_correlation_finite_n(&spec, r / scale)),
            0.0,
        );
    }
    let mid = 0.5 * (cfg.probe_range[0] + cfg.probe_range[1]);
    let small_r = 0.5 * mid * mid;
    res.push_scalar("probe_small_r_law", small_r, 0.0);
    let probe = res.scalar("probe_kappa").unwrap().clone();
    // relative tolerance widened by three standard errors of the estimate
    res.checks.push(Check::within(
        "probe_small_r_law",
        probe.value,
        small_r,
        cfg.probe_tolerance * small_r + 3.0 * probe.std_err,
        "kappa at the probe against r^2/2",
    ));
    let far = res.scalar("far_kappa").unwrap().value;
    res.checks.push(Check::within("far_field", far, 1.0, cfg.far_tolerance, "kappa in the far range"));
    res.checks.push(Check::flag(
        "conservation",
        acc.in_window + acc.outside == acc.roots && acc.radial.hist.total_recorded() == acc.pairs,
        acc.roots as f64,
        "window + outside = roots; binned + out-of-range = pairs",
    ));
    res.push_scalar("window_scaled_radius", window, 0.0);
    res.push_scalar("roots_in_window", acc.in_window as f64, 0.0);
    res.push_scalar("pairs", acc.pairs as f64, 0.0);
    res.max_abs_z_score = max_z;
    res.curve = Some(curve);
    res.theory_curve = Some(theory);
    res.z_scores = Some(z);
    Ok(res.finish())
}
