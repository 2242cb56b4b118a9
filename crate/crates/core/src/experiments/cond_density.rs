//! Scaled radial density of the zeros of sections conditioned to vanish at
//! the base point.

use std::f64::consts::PI;

use super::config::{ExperimentConfig, ExperimentKind};
use super::result::{Check, ExperimentResult};
use super::{annulus_average, max_rel_err, run_chunked, scaled_disc_area, score_curve, RadialAccumulator};
use crate::densities::kappa_cond;
use crate::ensembles::{ConditionSpec, Conditioner};
use crate::error::{Error, Result};
use crate::numerics::{trial_rng, uniform_edges};
use crate::zeros::{find_zeros, scaled_radii};

struct Acc {
    radial: RadialAccumulator,
    roots: u64,
    conditioned: u64,
    trials_without_root: u64,
    wrong_count: u64,
}

pub fn run_cond_density(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.experiment != ExperimentKind::CondDensity {
        return Err(Error::Config("run_cond_density needs experiment = cond_density".into()));
    }
    let spec = cfg.ensemble()?;
    let p = cfg.base_point;
    let conditioner = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&[p])?)?;
    let edges = uniform_edges(cfg.r_min, cfg.r_max, cfg.n_bins)?;
    let ranges = vec![cfg.near_range, cfg.probe_range, cfg.far_range];
    let n = spec.order() as u64;

    let parts = run_chunked(
        cfg.trials,
        cfg.chunk_size,
        || Acc {
            radial: RadialAccumulator::new(edges.clone(), ranges.clone()),
            roots: 0,
            conditioned: 0,
            trials_without_root: 0,
            wrong_count: 0,
        },
        |acc, t| {
            let mut rng = trial_rng(cfg.master_seed, t);
            let s = conditioner.sample(&spec, &mut rng);
            let zs = find_zeros(&s, &spec)?;
            if zs.total() as u64 != n {
                acc.wrong_count += 1;
            }
            let radii = scaled_radii(&zs, p, &spec);
            let hits = radii.iter().filter(|r| r.conditioned).count() as u64;
            if hits == 0 {
                acc.trials_without_root += 1;
            }
            acc.roots += radii.len() as u64;
            acc.conditioned += hits;
            let kept: Vec<f64> = radii.iter().filter(|r| !r.conditioned).map(|r| r.radius).collect();
            acc.radial.record_trial(&kept);
            Ok(())
        },
    )?;
    let mut it = parts.into_iter();
    let mut acc = it.next().expect("at least one chunk");
    for part in it {
        acc.radial.merge(&part.radial);
        acc.roots += part.roots;
        acc.conditioned += part.conditioned;
        acc.trials_without_root += part.trials_without_root;
        acc.wrong_count += part.wrong_count;
    }

    // empirical density per unit scaled area, divided by 1/pi
    let area = |lo: f64, hi: f64| scaled_disc_area(&spec, hi) - scaled_disc_area(&spec, lo);
    let norm: Vec<f64> = edges.windows(2).map(|w| area(w[0], w[1]) / PI).collect();
    let curve = acc.radial.hist.curve(&norm);
    let theory: Vec<f64> = edges
        .windows(2)
        .map(|w| annulus_average(&spec, w[0], w[1], |r| kappa_cond(1, r)))
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
    match max_rel_err(&curve, &theory, cfg.rel_err_min_hits) {
        Some(e) => res.checks.push(Check::within(
            "bin_relative_error",
            e,
            0.0,
            cfg.rel_err_threshold,
            format!("max relative error over bins with >= {} hits", cfg.rel_err_min_hits),
        )),
        None => res.checks.push(Check::flag(
            "bin_relative_error",
            true,
            0.0,
            format!("no bin reached {} hits", cfg.rel_err_min_hits),
        )),
    }
    for (k, name) in ["near", "probe", "far"].iter().enumerate() {
        let [lo, hi] = ranges[k];
        let stat = &acc.radial.range_counts[k];
        let a = area(lo, hi) / PI;
        let th = annulus_average(&spec, lo, hi, |r| kappa_cond(1, r));
        res.push_scalar(&format!("{name}_density"), stat.mean / a, stat.std_err() / a);
        res.push_scalar(&format!("{name}_theory"), th, 0.0);
    }
    let probe_mid = 0.5 * (cfg.probe_range[0] + cfg.probe_range[1]);
    res.push_scalar("probe_theory_point", kappa_cond(1, probe_mid), 0.0);
    let ratio = |name: &str| res.scalar(&format!("{name}_density")).unwrap().value / res.scalar(&format!("{name}_theory")).unwrap().value;
    let near = ratio("near");
    let probe = res.scalar("probe_density").unwrap().value / kappa_cond(1, probe_mid);
    let far_emp = res.scalar("far_density").unwrap().value;
    let far_th = res.scalar("far_theory").unwrap().value;
    res.checks.push(Check::within("near_origin_ratio", near, 1.0, cfg.near_tolerance, "empirical / theory"));
    res.checks.push(Check::within("probe_ratio", probe, 1.0, cfg.probe_tolerance, "empirical / kappa at the probe centre"));
    res.checks.push(Check::within("far_field_theory", far_th, 1.0, cfg.far_tolerance, "theory in the far range"));
    res.checks.push(Check::within("far_field_empirical", far_emp, 1.0, cfg.far_tolerance, "empirical in the far range"));
    res.checks.push(Check::flag(
        "root_count",
        acc.wrong_count == 0,
        acc.wrong_count as f64,
        "trials whose zero count differs from N",
    ));
    res.checks.push(Check::flag(
        "conditioned_root_present",
        acc.trials_without_root == 0,
        acc.trials_without_root as f64,
        "trials without a root at the base point",
    ));
    let recorded = acc.radial.hist.total_recorded() + acc.conditioned;
    res.checks.push(Check::flag(
        "conservation",
        recorded == acc.roots,
        (acc.roots - recorded.min(acc.roots)) as f64,
        "binned + out-of-range + excluded = roots processed",
    ));
    res.push_scalar("roots_processed", acc.roots as f64, 0.0);
    res.push_scalar("excluded_conditioned", acc.conditioned as f64, 0.0);
    res.max_abs_z_score = max_z;
    res.curve = Some(curve);
    res.theory_curve = Some(theory);
    res.z_scores = Some(z);
    Ok(res.finish())
}
