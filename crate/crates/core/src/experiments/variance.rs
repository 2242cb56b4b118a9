//! Monte Carlo variance of a linear statistic of the zeros against the
//! bipotential quadrature.

use super::config::{ExperimentConfig, ExperimentKind};
use super::result::{Check, ExperimentResult};
use super::run_chunked;
use crate::densities::variance_quadrature;
use crate::ensembles::sample_section;
use crate::error::{Error, Result};
use crate::numerics::stats::MomentStat;
use crate::numerics::trial_rng;
use crate::zeros::find_zeros;

pub fn run_variance_check(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    if cfg.experiment != ExperimentKind::VarianceCheck {
        return Err(Error::Config("run_variance_check needs experiment = variance_check".into()));
    }
    let spec = cfg.ensemble()?;
    let phi = &cfg.test_function;
    let at_inf = phi.value_at_infinity();
    let parts = run_chunked(cfg.trials, cfg.chunk_size, MomentStat::default, |acc, t| {
        let mut rng = trial_rng(cfg.master_seed, t);
        let zs = find_zeros(&sample_section(&spec, &mut rng), &spec)?;
        let stat: f64 =
            zs.affine_roots.iter().map(|&z| phi.value(z)).sum::<f64>() + zs.roots_at_infinity as f64 * at_inf;
        acc.push(stat);
        Ok(())
    })?;
    let mut m = MomentStat::default();
    for part in &parts {
        m.merge(part);
    }
    let mc = m.variance();
    let se = m.variance_std_err();
    let quad = variance_quadrature(&spec, phi)?;
    let z = if se > 0.0 { (mc - quad) / se } else { 0.0 };

    let mut res = ExperimentResult::new(cfg.clone());
    res.push_scalar("mc_mean", m.mean, (mc / m.count as f64).sqrt());
    res.push_scalar("mc_variance", mc, se);
    res.push_scalar("quadrature_variance", quad, 0.0);
    res.push_scalar("z_score", z, 0.0);
    res.checks.push(Check::within(
        "variance_agreement",
        mc,
        quad,
        cfg.z_threshold * se + 1e-12 * (1.0 + quad.abs()),
        format!("|MC - quadrature| within {} standard errors", cfg.z_threshold),
    ));
    res.max_abs_z_score = z.abs();
    Ok(res.finish())
}
