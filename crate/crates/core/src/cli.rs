//! Command-line front end. Exit codes: 0 success, 1 error, 2 an acceptance
//! check failed, 64 bad usage.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::densities::{
    conditional_density_finite_n, kappa_cond, limit_density_kkm, pair_correlation_finite_n, pair_correlation_limit,
};
use crate::ensembles::{EnsembleSpec, Model};
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentConfig, ExperimentKind, ModelKind};
use crate::kernels::{conditional_kernel_diag, kernel_eval};
use crate::output::{fmt_num, now_unix, summary_json, write_outputs_with, RunInfo};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ACCEPTANCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "zerocond", version, about = "Conditional zero statistics of Gaussian random polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    /// Projective line, degree N
    Cp1,
    /// Truncated Bargmann-Fock
    Bf,
}

impl ModelArg {
    fn model(self, n: u32) -> Model {
        match self {
            ModelArg::Cp1 => Model::ProjectiveLine { degree: n },
            ModelArg::Bf => Model::BargmannFock { truncation: n },
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate P_N, Lambda_N and the conditional kernel
    Kernel(KernelArgs),
    /// Tabulate closed-form and finite-N densities on a radius grid
    Density(DensityArgs),
    /// Scaled conditional density of zeros given s(p) = 0
    CondDensity(ExpArgs),
    /// Pair correlation of unconditioned zeros
    PairCorr(ExpArgs),
    /// Convergence of N times the unscaled correction
    UnscaledSweep(ExpArgs),
    /// Monte Carlo variance against the bipotential quadrature
    VarianceCheck(ExpArgs),
    /// Joint zero density ratios at small N
    JointDensity(ExpArgs),
    /// Run the invariant suite
    Selftest,
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long, value_enum, default_value = "cp1")]
    model: ModelArg,
    #[arg(long = "N", default_value_t = 10)]
    n: u32,
    /// Point as re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    w: Complex64,
    /// Conditioning point (repeatable); adds the conditional diagonal at z
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    cond: Vec<Complex64>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    /// kappa_m^cond(r)
    #[arg(long, group = "what")]
    kappa_cond: bool,
    /// Trace densities K_km against omega_0^m
    #[arg(long, group = "what")]
    kkm: bool,
    /// Finite-N conditional density over the limit density 1/pi, at r = sqrt(N) d
    #[arg(long, group = "what")]
    finite_n: bool,
    /// Pair correlation, limit and optionally finite N
    #[arg(long, group = "what")]
    pair: bool,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long = "N")]
    n: Option<u32>,
    /// lo:hi:step
    #[arg(long, default_value = "0.1:3:0.1", value_parser = parse_grid)]
    r_grid: Grid,
}

#[derive(Debug, Args)]
struct ExpArgs {
    /// JSON configuration; flags below override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Base point as re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    p: Option<Complex64>,
    /// Output directory (default out/<command>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    print_config: bool,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let p: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let [lo, hi, step] = p[..] else {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    };
    if !(step > 0.0 && hi >= lo) {
        return Err(format!("bad grid {s:?}"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok(Grid((0..=n).map(|i| lo + step * i as f64).collect()))
}

/// Entry point shared by the binary and the tests.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Kernel(a) => kernel(a, out),
        Command::Density(a) => density(a, out),
        Command::CondDensity(a) => experiment(ExperimentKind::CondDensity, "cond-density", a, out),
        Command::PairCorr(a) => experiment(ExperimentKind::PairCorr, "pair-corr", a, out),
        Command::UnscaledSweep(a) => experiment(ExperimentKind::UnscaledSweep, "unscaled-sweep", a, out),
        Command::VarianceCheck(a) => experiment(ExperimentKind::VarianceCheck, "variance-check", a, out),
        Command::JointDensity(a) => experiment(ExperimentKind::JointDensitySmallN, "joint-density", a, out),
        Command::Selftest => {
            let items = selftest::run_selftest();
            for it in &items {
                writeln!(out, "{} {}: {}", if it.passed { "PASS" } else { "FAIL" }, it.name, it.detail)?;
            }
            Ok(if items.iter().all(|i| i.passed) { EXIT_OK } else { EXIT_ACCEPTANCE })
        }
    }
}

fn kernel(a: KernelArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = EnsembleSpec::new(a.model.model(a.n))?;
    let k = kernel_eval(&spec, a.z, a.w);
    let mut head = vec!["p_n", "lambda_n", "pi_norm"];
    let mut row = vec![fmt_num(Some(k.p_n)), fmt_num(Some(k.lambda_n)), fmt_num(Some(k.pi_norm))];
    if !a.cond.is_empty() {
        head.push("conditional_diag_z");
        row.push(fmt_num(Some(conditional_kernel_diag(&spec, &a.cond, a.z)?)));
    }
    writeln!(out, "{}", head.join(","))?;
    writeln!(out, "{}", row.join(","))?;
    Ok(EXIT_OK)
}

fn density(a: DensityArgs, out: &mut dyn Write) -> Result<i32> {
    let grid = &a.r_grid.0;
    if a.finite_n || a.pair && a.n.is_some() {
        let n = a.n.ok_or_else(|| Error::Config("--finite-n needs --N".into()))?;
        let spec = EnsembleSpec::projective_line(n)?;
        let s = spec.length_scale();
        let zero = Complex64::new(0.0, 0.0);
        if a.pair {
            writeln!(out, "r,pair_limit,pair_finite_n")?;
            for &r in grid {
                let fin = pair_correlation_finite_n(&spec, r / s);
                writeln!(out, "{},{},{}", fmt_num(Some(r)), fmt_num(Some(pair_correlation_limit(r))), fmt_num(Some(fin)))?;
            }
        } else {
            writeln!(out, "r,kappa_limit,kappa_finite_n")?;
            for &r in grid {
                if r <= 0.0 {
                    continue;
                }
                let z = Complex64::new((r / s).tan(), 0.0);
                let fin = conditional_density_finite_n(&spec, zero, z)? * std::f64::consts::PI / n as f64;
                writeln!(out, "{},{},{}", fmt_num(Some(r)), fmt_num(Some(kappa_cond(1, r))), fmt_num(Some(fin)))?;
            }
        }
    } else if a.kkm {
        writeln!(out, "r,density")?;
        for &r in grid {
            if r > 0.0 {
                writeln!(out, "{},{}", fmt_num(Some(r)), fmt_num(Some(limit_density_kkm(a.m, a.k, r)?)))?;
            }
        }
    } else if a.pair {
        writeln!(out, "r,pair")?;
        for &r in grid {
            writeln!(out, "{},{}", fmt_num(Some(r)), fmt_num(Some(pair_correlation_limit(r))))?;
        }
    } else {
        writeln!(out, "r,kappa")?;
        for &r in grid {
            writeln!(out, "{},{}", fmt_num(Some(r)), fmt_num(Some(kappa_cond(a.m, r))))?;
        }
    }
    Ok(EXIT_OK)
}

fn experiment(kind: ExperimentKind, command: &str, a: ExpArgs, out: &mut dyn Write) -> Result<i32> {
    let mut doc = match &a.config {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => serde_json::json!({}),
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| Error::Config("configuration must be a JSON object".into()))?;
    if let Some(n) = a.n {
        obj.insert("degree".into(), n.into());
    }
    if let Some(m) = a.model {
        let mk = match m {
            ModelArg::Cp1 => ModelKind::ProjectiveLine,
            ModelArg::Bf => ModelKind::BargmannFock,
        };
        obj.insert("model".into(), serde_json::to_value(mk)?);
    }
    if let Some(t) = a.trials {
        obj.insert("trials".into(), t.into());
    }
    if let Some(s) = a.seed {
        obj.insert("master_seed".into(), s.into());
    }
    if let Some(p) = a.p {
        obj.insert("base_point".into(), serde_json::to_value(p)?);
    }
    let cfg = ExperimentConfig::from_value(doc, Some(kind))?;
    if a.print_config {
        writeln!(out, "{}", cfg.to_json())?;
        return Ok(EXIT_OK);
    }
    let started = now_unix();
    let result = experiments::run(&cfg)?;
    let dir = a.out.unwrap_or_else(|| PathBuf::from("out").join(command));
    let info = RunInfo {
        command: command.into(),
        config_path: a.config.map(|p| p.display().to_string()),
        started_unix: Some(started),
    };
    write_outputs_with(&result, &dir, &info)?;
    write!(out, "{}", summary_json(&result)?)?;
    Ok(if result.passed { EXIT_OK } else { EXIT_ACCEPTANCE })
}
