//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or validation errors, 2 for I/O
//! errors (including refusing to overwrite a file without `--force`).
//! Every random draw descends from `--seed`, which defaults to the config's
//! `seed` and then to 0.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};

use crate::engine::run as run_one;
use crate::error::{Error, Result};
use crate::harness::presets::describe;
use crate::harness::{
    create_output, emit_plot, generate_random_schedule, preset_schedule, run_batch, write_schedule,
    AggregateResult, BatchOptions, ExperimentSpec, Series, PRESET_IDS,
};
use crate::rng::{stream, HARNESS_STREAM};

#[derive(Debug, Parser)]
#[command(
    name = "mpmab",
    version,
    about = "Asynchronous multi-player bandit simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One run per algorithm listed in the config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Repeated runs, aggregate CSVs and a plot.
    Batch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write every full-length trace under `<out>/raw/`.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        force: bool,
    },
    /// Write a generated or published schedule.
    #[command(group(ArgGroup::new("source").required(true).args(["random", "preset"])))]
    Schedule {
        #[arg(long, requires_all = ["horizon", "players"])]
        random: bool,
        #[arg(long = "T", value_name = "N")]
        horizon: Option<u64>,
        #[arg(long = "M", value_name = "N")]
        players: Option<usize>,
        #[arg(long, conflicts_with = "preset")]
        seed: Option<u64>,
        #[arg(long, conflicts_with_all = ["horizon", "players"])]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Render aggregate (or single-run trace) CSVs as an SVG chart.
    Plot {
        #[arg(long = "in", value_name = "CSV", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// List the built-in schedule tables.
    Presets,
}

fn base_dir(config: &Path) -> &Path {
    config.parent().unwrap_or(Path::new("."))
}

fn write_with<F>(path: &Path, force: bool, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let mut out = create_output(path, force)?;
    f(&mut out).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Executes a parsed command, writing a summary to `stdout`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let say = |stdout: &mut dyn Write, line: String| {
        writeln!(stdout, "{line}").map_err(|e| Error::io("<stdout>", e))
    };
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            force,
        } => {
            let mut spec = ExperimentSpec::load(&config)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            let exp = spec.resolve(base_dir(&config))?;
            ensure_dir(&out)?;
            for &alg in &exp.algorithms {
                let trace = run_one(&exp.run_config(alg, exp.seed))?;
                let slug = alg.slug();
                write_with(&out.join(format!("{slug}.trace.csv")), force, |w| {
                    trace.write_csv(w)
                })?;
                if !trace.phases.is_empty() {
                    write_with(&out.join(format!("{slug}.phases.csv")), force, |w| {
                        trace.write_phase_csv(w)
                    })?;
                }
                if !trace.detections.is_empty() {
                    write_with(&out.join(format!("{slug}.detections.csv")), force, |w| {
                        trace.write_detection_csv(w)
                    })?;
                }
                for w in &trace.warnings {
                    eprintln!("warning: {w}");
                }
                say(
                    stdout,
                    format!(
                        "{alg}: final regret {:.3}, collisions {}",
                        trace.final_regret(),
                        trace.collisions.iter().map(|&c| c as u64).sum::<u64>()
                    ),
                )?;
            }
            Ok(())
        }
        Command::Batch {
            config,
            repeats,
            seed,
            out,
            raw,
            force,
        } => {
            let mut spec = ExperimentSpec::load(&config)?;
            if let Some(r) = repeats {
                spec.repeats = r;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            let exp = spec.resolve(base_dir(&config))?;
            ensure_dir(&out)?;
            let opts = BatchOptions {
                raw_dir: raw.then(|| out.join("raw")),
                force,
            };
            let result = run_batch(&exp, &opts)?;
            for (alg, series) in exp.algorithms.iter().zip(&result.series) {
                write_with(&out.join(format!("{}.csv", alg.slug())), force, |w| {
                    series.write_csv(w)
                })?;
                let (mean, se) = crate::harness::batch::mean_stderr(&series.finals);
                say(
                    stdout,
                    format!(
                        "{alg}: final regret {mean:.3} +/- {se:.3} over {} runs",
                        series.finals.len()
                    ),
                )?;
            }
            let svg = out.join("regret.svg");
            if svg.exists() && !force {
                return Err(Error::WouldOverwrite(svg));
            }
            emit_plot(&result, &svg)
        }
        Command::Schedule {
            random,
            horizon,
            players,
            seed,
            preset,
            out,
            force,
        } => {
            let sched = if random {
                let (t, m) = (horizon.unwrap_or_default(), players.unwrap_or_default());
                let mut rng = stream(seed.unwrap_or(0), HARNESS_STREAM);
                generate_random_schedule(t, m, &mut rng)?
            } else {
                preset_schedule(preset.as_deref().unwrap_or_default())?
            };
            write_with(&out, force, |w| write_schedule(&sched, w))
        }
        Command::Plot { inputs, out, force } => {
            let mut series = Vec::with_capacity(inputs.len());
            for path in &inputs {
                let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
                series.push(Series::read_csv(
                    &label_of(path),
                    std::io::BufReader::new(file),
                )?);
            }
            let result = AggregateResult {
                horizon: series
                    .iter()
                    .flat_map(|s| s.t.last().copied())
                    .max()
                    .unwrap_or(0),
                repeats: 1,
                series,
            };
            if out.exists() && !force {
                return Err(Error::WouldOverwrite(out));
            }
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                ensure_dir(parent)?;
            }
            emit_plot(&result, &out)
        }
        Command::Presets => {
            for id in PRESET_IDS {
                say(
                    stdout,
                    format!("{id}\t{}", describe(id).unwrap_or_default()),
                )?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
