//! Run an experiment from a JSON config and write curve.csv, summary.json,
//! plot.svg and manifest.json to a directory.
//!
//! `cargo run --release --example experiment_outputs -- out/demo`

use std::path::PathBuf;

use zerocond::experiments::{run, ExperimentConfig};
use zerocond::output::{parse_curve_csv, write_outputs};

fn main() -> zerocond::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("zerocond-demo"));
    // unspecified keys take the defaults of the experiment kind
    let cfg = ExperimentConfig::from_json(
        r#"{ "experiment": "cond_density", "model": "bargmann_fock", "degree": 150,
             "trials": 2000, "master_seed": 11, "n_bins": 10 }"#,
    )?;
    let res = run(&cfg)?;
    let manifest = write_outputs(&res, &dir)?;
    println!("wrote {} files and manifest.json to {}", manifest.files.len(), manifest.output_dir);
    for f in &manifest.files {
        println!("  {f}");
    }

    let rows = parse_curve_csv(&std::fs::read_to_string(dir.join("curve.csv"))?)?;
    println!("curve.csv: {} bins, first value {:?}", rows.value.len(), rows.value[0]);
    println!("passed: {}, max |z| {:.2}", res.passed, res.max_abs_z_score);
    Ok(())
}
