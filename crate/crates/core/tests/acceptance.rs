//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! The Monte Carlo criteria use the full trial counts and take a few
//! minutes in release mode on one core.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use zerocond::densities::limit::RadialProfile;
use zerocond::densities::{flat_log_integral, kappa_cond};
use zerocond::ensembles::{basis_eval, ConditionSpec, Conditioner, EnsembleSpec};
use zerocond::experiments::{fit_line, run, ExperimentConfig, ExperimentKind, ExperimentResult};
use zerocond::kernels::{conditional_kernel_diag, diagonal, kernel_eval, near_diagonal_residual, CoherentFrame};
use zerocond::output::summary_json;

const IDENTITY_REL: f64 = 1e-12;
const MC_TRIALS: u64 = 100_000;
const Z_MAX: f64 = 4.0;
const REL_ERR_MAX: f64 = 0.05;
const REL_ERR_MIN_HITS: u64 = 10_000;
const PROBE_R: f64 = 0.3;
const PROBE_REL: f64 = 0.10;
const PROBE_SE_MULT: f64 = 3.0;
const CONTRAST_MIN: f64 = 5.0;
const DECAY_WINDOW: [f64; 2] = [0.4, 1.1];
const FLAT_TOL: f64 = 1e-8;
const NEAR_BOUND_EXPONENT: f64 = -0.4;
const ONE_POINT_REL: f64 = 1e-10;
const MULTI_POINT_REL: f64 = 1e-6;
const VARIANCE_SE_MULT: f64 = 3.0;
const JOINT_N1_REL: f64 = 0.05;
const JOINT_N2_SE_MULT: f64 = 3.0;

type Step<'a> = Box<dyn Fn() -> zerocond::Result<(bool, String)> + 'a>;

struct Line {
    id: u32,
    passed: bool,
    text: String,
}

fn report(lines: &mut Vec<Line>, id: u32, passed: bool, started: Instant, text: String) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {text} ({:.1} s)", started.elapsed().as_secs_f64());
    lines.push(Line { id, passed, text });
}

fn scalar(res: &ExperimentResult, name: &str) -> (f64, f64) {
    let s = res.scalar(name).unwrap_or_else(|| panic!("missing scalar {name}"));
    (s.value, s.std_err)
}

fn check_passed(res: &ExperimentResult, name: &str) -> bool {
    res.check(name).unwrap_or_else(|| panic!("missing check {name}")).passed
}

fn criterion_1() -> (bool, String) {
    let mut worst: f64 = 0.0;
    for &t in &[1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 3.0, 10.0] {
        let p = RadialProfile { t };
        for m in 1..=4 {
            let lhs = p.g1().powi(m - 1) * (p.g1() + t * p.g2());
            let rhs = kappa_cond(m as u32, t.sqrt());
            worst = worst.max((lhs / rhs - 1.0).abs());
        }
    }
    (worst <= IDENTITY_REL, format!("max relative deviation {worst:.2e} (tol {IDENTITY_REL:e})"))
}

fn cond_density_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::CondDensity);
    cfg.degree = 100;
    cfg.trials = MC_TRIALS;
    cfg.master_seed = 7;
    cfg.z_threshold = Z_MAX;
    cfg.rel_err_threshold = REL_ERR_MAX;
    cfg.rel_err_min_hits = REL_ERR_MIN_HITS;
    cfg
}

fn criterion_2(res: &ExperimentResult) -> (bool, String) {
    let z = res.check("bin_z_scores").expect("z check");
    let rel = res.check("bin_relative_error").expect("rel check");
    let ok = z.passed && rel.passed && res.max_abs_z_score < Z_MAX;
    (
        ok,
        format!(
            "max |z| {:.2} (< {Z_MAX}), max rel err {:.3} in well-filled bins (< {REL_ERR_MAX})",
            res.max_abs_z_score, rel.observed
        ),
    )
}

fn criterion_3(cond: &ExperimentResult) -> zerocond::Result<(bool, String)> {
    let (dens, dens_se) = scalar(cond, "probe_density");
    let k = kappa_cond(1, PROBE_R);
    let dens_ok = (dens / k - 1.0).abs() <= PROBE_REL;

    let mut cfg = ExperimentConfig::defaults(ExperimentKind::PairCorr);
    cfg.degree = 100;
    cfg.trials = MC_TRIALS;
    cfg.master_seed = 7;
    let pair = run(&cfg)?;
    let (kap, kap_se) = scalar(&pair, "probe_kappa");
    let law = PROBE_R * PROBE_R / 2.0;
    let pair_ok = (kap - law).abs() <= PROBE_REL * law + PROBE_SE_MULT * kap_se;
    let contrast = dens / kap;
    let ok = dens_ok && pair_ok && contrast > CONTRAST_MIN;
    Ok((
        ok,
        format!(
            "conditional {dens:.4} +- {dens_se:.4} vs {k:.4}; pair {kap:.4} +- {kap_se:.4} vs {law:.4}; ratio {contrast:.1} (> {CONTRAST_MIN})"
        ),
    ))
}

fn criterion_4() -> zerocond::Result<(bool, String)> {
    let res = run(&ExperimentConfig::defaults(ExperimentKind::UnscaledSweep))?;
    let (slope, _) = scalar(&res, "decay_exponent");
    let (target, _) = scalar(&res, "target");
    let flat = flat_log_integral()?;
    let flat_err = (flat + PI.powi(3) / 6.0).abs();
    let decreasing = check_passed(&res, "remainder_decreasing");
    let ok = (DECAY_WINDOW[0]..=DECAY_WINDOW[1]).contains(&slope) && decreasing && flat_err <= FLAT_TOL;
    let last = res
        .table
        .as_ref()
        .and_then(|t| t.rows.last())
        .and_then(|r| r[1])
        .unwrap_or(f64::NAN);
    Ok((
        ok,
        format!(
            "N*correction {last:.5} -> {target:.5}, decay exponent {slope:.3} in {DECAY_WINDOW:?}, flat integral error {flat_err:.1e}"
        ),
    ))
}

fn criterion_5() -> zerocond::Result<(bool, String)> {
    let o = Complex64::new(0.0, 0.0);
    let u = Complex64::new(1.0, 0.0);
    let ns = [100u32, 200, 400, 800, 1600];
    let mut r = Vec::new();
    for &n in &ns {
        let spec = EnsembleSpec::with_degree_cap(zerocond::ensembles::Model::ProjectiveLine { degree: n }, n)?;
        r.push(near_diagonal_residual(&spec, o, u, o).abs());
    }
    let decreasing = r.windows(2).all(|w| w[1] < w[0]);
    // smallest C with |R_N| <= C N^-0.4 on the grid
    let c = ns
        .iter()
        .zip(&r)
        .map(|(&n, &v)| v / (n as f64).powf(NEAR_BOUND_EXPONENT))
        .fold(0.0, f64::max);
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let (slope, _) = fit_line(&xs, &ys);
    let ok = decreasing && slope <= NEAR_BOUND_EXPONENT;
    Ok((
        ok,
        format!(
            "|R_N(1,0)| {:.3e} -> {:.3e}, fitted C = {c:.4} for C N^{NEAR_BOUND_EXPONENT}, log-log slope {slope:.3}",
            r[0], r[4]
        ),
    ))
}

fn criterion_6() -> zerocond::Result<(bool, String)> {
    let c = Complex64::new;
    let mut one: f64 = 0.0;
    for n in [10u32, 50, 200] {
        let spec = EnsembleSpec::projective_line(n)?;
        for (p, z) in [(c(0.0, 0.0), c(0.1, 0.05)), (c(0.4, -0.3), c(0.5, -0.2)), (c(-1.2, 0.7), c(0.3, 0.3))] {
            let lhs = conditional_kernel_diag(&spec, &[p], z)?;
            let rhs = diagonal(&spec) * (1.0 - kernel_eval(&spec, z, p).p_n.powi(2));
            one = one.max((lhs - rhs).abs() / diagonal(&spec));
        }
    }

    // orthonormal basis of the sections vanishing at both points
    let spec = EnsembleSpec::projective_line(50)?;
    let pts = [c(0.0, 0.0), c(0.25, 0.1)];
    let cd = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&pts)?)?;
    let proj = cd.kernel_projector(spec.dim());
    let frame = CoherentFrame::new(&spec, &pts)?;
    let mut multi: f64 = 0.0;
    for z in [c(0.1, 0.0), c(0.2, 0.15), c(-0.3, 0.4), c(1.5, -0.5)] {
        let w = basis_eval(&spec, z)?.weighted;
        let mut oracle = Complex64::new(0.0, 0.0);
        for i in 0..w.len() {
            for j in 0..w.len() {
                oracle += w[i] * proj[(i, j)] * w[j].conj();
            }
        }
        let v = frame.conditional_diag(&spec, z);
        multi = multi.max((v - oracle.re).abs() / oracle.re);
    }
    let ok = one <= ONE_POINT_REL && multi <= MULTI_POINT_REL;
    Ok((
        ok,
        format!("one point {one:.1e} (tol {ONE_POINT_REL:e}), two points vs projector oracle {multi:.1e} (tol {MULTI_POINT_REL:e})"),
    ))
}

fn criterion_7() -> zerocond::Result<(bool, String)> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::VarianceCheck);
    cfg.degree = 50;
    cfg.trials = MC_TRIALS;
    cfg.z_threshold = VARIANCE_SE_MULT;
    let res = run(&cfg)?;
    let (mc, se) = scalar(&res, "mc_variance");
    let (quad, _) = scalar(&res, "quadrature_variance");
    let z = (mc - quad) / se;
    Ok((z.abs() <= VARIANCE_SE_MULT, format!("MC {mc:.5e} +- {se:.1e}, quadrature {quad:.5e}, z = {z:.2}")))
}

fn criterion_8() -> zerocond::Result<(bool, String)> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::JointDensitySmallN);
    cfg.degree = 1;
    let one = run(&cfg)?;
    let (ratio, _) = scalar(&one, "origin_vs_one_empirical");
    let ok1 = (ratio / 4.0 - 1.0).abs() <= JOINT_N1_REL;

    cfg.degree = 2;
    cfg.z_threshold = JOINT_N2_SE_MULT;
    let two = run(&cfg)?;
    let (swap, _) = scalar(&two, "swap_empirical");
    let (zs, _) = scalar(&two, "swap_z");
    let (rot, _) = scalar(&two, "rotation_empirical");
    let (zr, _) = scalar(&two, "rotation_z");
    let ok2 = zs.abs() <= JOINT_N2_SE_MULT && zr.abs() <= JOINT_N2_SE_MULT;
    Ok((
        ok1 && ok2,
        format!("N=1 ratio {ratio:.4} vs 4; N=2 swap {swap:.3} (z {zs:.2}), rotation {rot:.3} (z {zr:.2})"),
    ))
}

fn criterion_9() -> zerocond::Result<(bool, String)> {
    let mut all = true;
    let mut sizes = Vec::new();
    for kind in ExperimentKind::ALL {
        let mut cfg = ExperimentConfig::defaults(kind);
        cfg.trials = match kind {
            ExperimentKind::UnscaledSweep => 1,
            ExperimentKind::JointDensitySmallN => 20_000,
            _ => 300,
        };
        if kind == ExperimentKind::VarianceCheck {
            cfg.degree = 10;
        }
        let a = summary_json(&run(&cfg)?)?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().expect("pool");
        let b = pool.install(|| run(&cfg).and_then(|r| summary_json(&r)))?;
        all &= a.as_bytes() == b.as_bytes();
        sizes.push(format!("{}={}B", kind.name(), a.len()));
    }
    Ok((all, format!("byte-identical summary.json on rerun: {}", sizes.join(", "))))
}

fn main() {
    let mut lines = Vec::new();

    let t = Instant::now();
    let (ok, text) = criterion_1();
    report(&mut lines, 1, ok, t, text);

    let t = Instant::now();
    let cond = run(&cond_density_config()).expect("conditional density run");
    let (ok, text) = criterion_2(&cond);
    report(&mut lines, 2, ok, t, text);

    let steps: Vec<(u32, Step)> = vec![
        (3, Box::new(|| criterion_3(&cond))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
    ];
    for (id, f) in steps {
        let t = Instant::now();
        match f() {
            Ok((ok, text)) => report(&mut lines, id, ok, t, text),
            Err(e) => report(&mut lines, id, false, t, format!("error: {e}")),
        }
    }

    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed.len(), lines.len());
    if !failed.is_empty() {
        for l in lines.iter().filter(|l| !l.passed) {
            eprintln!("criterion {} failed: {}", l.id, l.text);
        }
        std::process::exit(1);
    }
}
