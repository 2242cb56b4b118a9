//! Result files: `curve.csv`, `table.csv`, `summary.json`, `plot.svg`, and
//! `manifest.json`, which is written last and lists the others.
//!
//! Numbers are printed with 17 significant digits so they read back to the
//! same `f64`. Missing values are empty fields; no file ever contains NaN
//! or infinity tokens.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{Check, ExperimentConfig, ExperimentResult, Scalar, CODE_VERSION};

pub const CURVE_COLUMNS: [&str; 6] = ["r_lo", "r_hi", "empirical", "std_err", "theory", "z_score"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<String>,
    pub master_seed: u64,
    pub output_dir: String,
    /// Seconds since the Unix epoch.
    pub started_unix: f64,
    pub finished_unix: f64,
    pub runtime_seconds: f64,
    pub version: String,
    pub files: Vec<String>,
}

/// Run metadata recorded in the manifest.
#[derive(Debug, Clone, Default)]
pub struct RunInfo {
    pub command: String,
    pub config_path: Option<String>,
    pub started_unix: Option<f64>,
}

/// The summary document. Identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: String,
    pub master_seed: u64,
    pub passed: bool,
    pub max_abs_z_score: f64,
    pub checks: Vec<Check>,
    pub scalars: Vec<Scalar>,
    pub code_version: String,
    pub config: ExperimentConfig,
}

impl Summary {
    pub fn of(result: &ExperimentResult) -> Self {
        Summary {
            experiment: result.config.experiment.name().into(),
            master_seed: result.config.master_seed,
            passed: result.passed,
            max_abs_z_score: result.max_abs_z_score,
            checks: result.checks.clone(),
            scalars: result.scalars.clone(),
            code_version: result.code_version.clone(),
            config: result.config.clone(),
        }
    }
}

pub fn now_unix() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// `{:.16e}` for finite values, empty otherwise.
pub fn fmt_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => String::new(),
    }
}

pub fn curve_csv(result: &ExperimentResult) -> Option<String> {
    let curve = result.curve.as_ref()?;
    let theory = result.theory_curve.as_ref()?;
    let z = result.z_scores.clone().unwrap_or_else(|| vec![None; curve.n_bins()]);
    let mut s = CURVE_COLUMNS.join(",");
    s.push('\n');
    for i in 0..curve.n_bins() {
        let (lo, hi) = curve.bin(i);
        let has = curve.value[i].is_some();
        let fields = [
            fmt_num(Some(lo)),
            fmt_num(Some(hi)),
            fmt_num(curve.value[i]),
            fmt_num(has.then_some(curve.std_err[i])),
            fmt_num(Some(theory[i])),
            fmt_num(z[i]),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    Some(s)
}

pub fn table_csv(result: &ExperimentResult) -> Option<String> {
    let t = result.table.as_ref()?;
    let mut s = t.columns.join(",");
    s.push('\n');
    for row in &t.rows {
        s.push_str(&row.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    Some(s)
}

/// Rows of a curve file read back.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRows {
    pub bin_edges: Vec<f64>,
    pub value: Vec<Option<f64>>,
    pub std_err: Vec<Option<f64>>,
    pub theory: Vec<f64>,
    pub z_score: Vec<Option<f64>>,
}

pub fn parse_curve_csv(text: &str) -> Result<CurveRows> {
    let mut lines = text.lines();
    if lines.next() != Some(CURVE_COLUMNS.join(",").as_str()) {
        return Err(Error::Config("curve.csv header mismatch".into()));
    }
    let field = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| Error::Config(format!("bad number {s:?}: {e}")))
        }
    };
    let mut out = CurveRows {
        bin_edges: vec![],
        value: vec![],
        std_err: vec![],
        theory: vec![],
        z_score: vec![],
    };
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Config(format!("expected 6 fields, got {}", f.len())));
        }
        let need = |x: Option<f64>| x.ok_or_else(|| Error::Config("missing required field".into()));
        let lo = need(field(f[0])?)?;
        let hi = need(field(f[1])?)?;
        if out.bin_edges.is_empty() {
            out.bin_edges.push(lo);
        }
        out.bin_edges.push(hi);
        out.value.push(field(f[2])?);
        out.std_err.push(field(f[3])?);
        out.theory.push(need(field(f[4])?)?);
        out.z_score.push(field(f[5])?);
    }
    Ok(out)
}

pub fn summary_json(result: &ExperimentResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Summary::of(result))?;
    s.push('\n');
    Ok(s)
}

struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    log_x: bool,
    log_y: bool,
    /// Points with optional error bars.
    points: Vec<(f64, f64, f64)>,
    line: Vec<(f64, f64)>,
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const M: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 55.0); // left, right, top, bottom

impl Plot {
    fn render(&self) -> String {
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let ok = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
        let xs: Vec<f64> = self
            .points
            .iter()
            .map(|p| p.0)
            .chain(self.line.iter().map(|p| p.0))
            .filter(|&v| ok(v, self.log_x))
            .map(tx)
            .collect();
        let ys: Vec<f64> = self
            .points
            .iter()
            .flat_map(|p| [p.1 - p.2, p.1 + p.2])
            .chain(self.line.iter().map(|p| p.1))
            .filter(|&v| ok(v, self.log_y))
            .map(ty)
            .collect();
        let range = |v: &[f64], pad: f64| {
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                return (0.0, 1.0);
            }
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - pad * span, hi + pad * span)
        };
        let (x0, x1) = range(&xs, 0.02);
        let (mut y0, y1) = range(&ys, 0.05);
        if !self.log_y && y0 > 0.0 && y0 < 0.3 * y1 {
            y0 = 0.0;
        }
        let px = |v: f64| M.0 + (tx(v) - x0) / (x1 - x0) * (W - M.0 - M.1);
        let py = |v: f64| H - M.3 - (ty(v) - y0) / (y1 - y0) * (H - M.2 - M.3);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, esc(&self.title));
        let (bx0, by0, bx1, by1) = (M.0, M.2, W - M.1, H - M.3);
        let _ = writeln!(
            s,
            r#"<rect x="{bx0}" y="{by0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            bx1 - bx0,
            by1 - by0
        );
        for k in 0..=5 {
            let f = k as f64 / 5.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let xl = if self.log_x { 10f64.powf(xv) } else { xv };
            let yl = if self.log_y { 10f64.powf(yv) } else { yv };
            let gx = bx0 + f * (bx1 - bx0);
            let gy = by1 - f * (by1 - by0);
            let _ = writeln!(s, r#"<line x1="{gx:.2}" y1="{by1}" x2="{gx:.2}" y2="{}" stroke="black"/>"#, by1 + 5.0);
            let _ = writeln!(s, r#"<text x="{gx:.2}" y="{}" text-anchor="middle">{}</text>"#, by1 + 18.0, tick(xl));
            let _ = writeln!(s, r#"<line x1="{}" y1="{gy:.2}" x2="{bx0}" y2="{gy:.2}" stroke="black"/>"#, bx0 - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, bx0 - 8.0, gy + 4.0, tick(yl));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (bx0 + bx1) / 2.0, H - 12.0, esc(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            (by0 + by1) / 2.0,
            esc(&self.y_label)
        );
        let line: Vec<String> = self
            .line
            .iter()
            .filter(|p| ok(p.0, self.log_x) && ok(p.1, self.log_y))
            .map(|p| format!("{:.2},{:.2}", px(p.0), py(p.1)))
            .collect();
        if !line.is_empty() {
            let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="1.5"/>"##, line.join(" "));
        }
        for &(x, y, e) in &self.points {
            if !(ok(x, self.log_x) && ok(y, self.log_y)) {
                continue;
            }
            let (cx, cy) = (px(x), py(y));
            if e > 0.0 && e.is_finite() {
                let lo = if ok(y - e, self.log_y) { py(y - e) } else { by1 };
                let _ = writeln!(s, r##"<line x1="{cx:.2}" y1="{lo:.2}" x2="{cx:.2}" y2="{:.2}" stroke="#1f77b4"/>"##, py(y + e));
            }
            let _ = writeln!(s, r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="2.5" fill="#1f77b4"/>"##);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Empirical points with error bars over the theory curve; log axes for
/// the pair correlation, whose small-r behaviour is a power law.
pub fn plot_svg(result: &ExperimentResult) -> Option<String> {
    use crate::experiments::ExperimentKind as K;
    let name = result.config.experiment.name();
    if let (Some(curve), Some(theory)) = (&result.curve, &result.theory_curve) {
        let mid = |i: usize| 0.5 * (curve.bin_edges[i] + curve.bin_edges[i + 1]);
        let points = (0..curve.n_bins())
            .filter_map(|i| curve.value[i].map(|v| (mid(i), v, curve.std_err[i])))
            .collect();
        let line = (0..curve.n_bins()).map(|i| (mid(i), theory[i])).collect();
        let log = result.config.experiment == K::PairCorr;
        return Some(
            Plot {
                title: format!("{name}: empirical vs theory"),
                x_label: "scaled radius r".into(),
                y_label: "density / (1/pi)".into(),
                log_x: log,
                log_y: log,
                points,
                line,
            }
            .render(),
        );
    }
    let t = result.table.as_ref()?;
    let col = |n: &str| t.columns.iter().position(|c| c == n);
    let (xi, yi) = (col("N")?, col("abs_error")?);
    let points: Vec<(f64, f64, f64)> = t
        .rows
        .iter()
        .filter_map(|r| Some((r[xi]?, r[yi]?, 0.0)))
        .collect();
    let line = match (result.scalar("decay_exponent"), result.scalar("decay_prefactor")) {
        (Some(a), Some(c)) => points.iter().map(|p| (p.0, c.value * p.0.powf(-a.value))).collect(),
        _ => vec![],
    };
    Some(
        Plot {
            title: format!("{name}: |N corr - target| and fitted power law"),
            x_label: "N".into(),
            y_label: "|N corr - target|".into(),
            log_x: true,
            log_y: true,
            points,
            line,
        }
        .render(),
    )
}

/// Write every output file, then the manifest. On failure the files
/// written so far are removed.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<RunManifest> {
    write_outputs_with(result, dir, &RunInfo::default())
}

pub fn write_outputs_with(result: &ExperimentResult, dir: &Path, info: &RunInfo) -> Result<RunManifest> {
    let mut written: Vec<PathBuf> = Vec::new();
    let out = write_all(result, dir, info, &mut written);
    if out.is_err() {
        for p in &written {
            let _ = fs::remove_file(p);
        }
    }
    out
}

fn write_all(result: &ExperimentResult, dir: &Path, info: &RunInfo, written: &mut Vec<PathBuf>) -> Result<RunManifest> {
    fs::create_dir_all(dir)?;
    let mut files: Vec<(&str, String)> = Vec::new();
    if let Some(c) = curve_csv(result) {
        files.push(("curve.csv", c));
    }
    if let Some(t) = table_csv(result) {
        files.push(("table.csv", t));
    }
    files.push(("summary.json", summary_json(result)?));
    if let Some(p) = plot_svg(result) {
        files.push(("plot.svg", p));
    }
    let mut names = Vec::new();
    for (name, body) in &files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        names.push(name.to_string());
    }
    let finished = now_unix();
    let manifest = RunManifest {
        command: if info.command.is_empty() {
            result.config.experiment.name().replace('_', "-")
        } else {
            info.command.clone()
        },
        config_path: info.config_path.clone(),
        master_seed: result.config.master_seed,
        output_dir: dir.display().to_string(),
        started_unix: info.started_unix.unwrap_or(finished - result.runtime_seconds),
        finished_unix: finished,
        runtime_seconds: result.runtime_seconds,
        version: CODE_VERSION.into(),
        files: names,
    };
    let path = dir.join("manifest.json");
    let mut body = serde_json::to_string_pretty(&manifest)?;
    body.push('\n');
    fs::write(&path, body)?;
    written.push(path);
    Ok(manifest)
}
