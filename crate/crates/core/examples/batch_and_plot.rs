//! Seed batch from an experiment description, written as aggregate CSVs and
//! an SVG chart.
//!
//!     cargo run --release --example batch_and_plot [out-dir]

use std::path::{Path, PathBuf};

use mpmab::harness::{create_output, emit_plot, run_batch, BatchOptions, ExperimentSpec};

const SPEC: &str = r#"{
    "env": { "K": 10 },
    "schedule": { "random": { "players": 5 } },
    "T": 100000,
    "algorithms": ["ace", "ucb(2.0)", "rd-ucb(2.0)"],
    "repeats": 8,
    "seed": 1
}"#;

fn main() -> mpmab::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "batch-out".into())
        .into();
    let exp = ExperimentSpec::from_json(SPEC)?.resolve(Path::new("."))?;
    let result = run_batch(&exp, &BatchOptions::default())?;
    for (alg, series) in exp.algorithms.iter().zip(&result.series) {
        let path = out.join(format!("{}.csv", alg.slug()));
        series
            .write_csv(create_output(&path, true)?)
            .map_err(|e| mpmab::Error::io(&path, e))?;
        let mean = series.finals.iter().sum::<f64>() / series.finals.len() as f64;
        println!(
            "{alg:>12}: mean final regret {mean:.1} -> {}",
            path.display()
        );
    }
    let svg = out.join("regret.svg");
    emit_plot(&result, &svg)?;
    println!("chart -> {}", svg.display());
    Ok(())
}
