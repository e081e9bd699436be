//! Repeated runs and their aggregation.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::engine::run;
use crate::error::{ConfigError, Error, Result};
use crate::harness::spec::Experiment;
use crate::policy::Algorithm;

/// Upper bound on rows per aggregate curve.
pub const MAX_POINTS: usize = 2000;

/// Mean cumulative regret of one algorithm across repeats.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub t: Vec<u64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Final cumulative regret of each repeat, repeat 0 first.
    pub finals: Vec<f64>,
}

impl Series {
    /// `t,mean_regret,stderr`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,mean_regret,stderr")?;
        for i in 0..self.t.len() {
            writeln!(out, "{},{},{}", self.t[i], self.mean[i], self.stderr[i])?;
        }
        out.flush()
    }

    /// Reads an aggregate CSV, or a single-run trace CSV (zero stderr).
    pub fn read_csv<R: BufRead>(label: &str, input: R) -> Result<Series, ConfigError> {
        let malformed = |detail: String| ConfigError::Malformed {
            what: "regret CSV",
            detail,
        };
        let mut reader = csv::Reader::from_reader(input);
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| malformed(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let aggregate = match headers
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .as_slice()
        {
            ["t", "mean_regret", "stderr"] => true,
            ["t", "cum_regret", ..] => false,
            other => {
                return Err(malformed(format!(
                    "unrecognized header `{}`",
                    other.join(",")
                )))
            }
        };
        let mut series = Series {
            label: label.to_string(),
            t: Vec::new(),
            mean: Vec::new(),
            stderr: Vec::new(),
            finals: Vec::new(),
        };
        for record in reader.records() {
            let record = record.map_err(|e| malformed(e.to_string()))?;
            let field = |i: usize| record.get(i).unwrap_or("");
            let t = field(0)
                .parse()
                .map_err(|_| malformed(format!("bad t `{}`", field(0))))?;
            let mean = field(1)
                .parse()
                .map_err(|_| malformed(format!("bad regret `{}`", field(1))))?;
            let stderr = if aggregate {
                field(2)
                    .parse()
                    .map_err(|_| malformed(format!("bad stderr `{}`", field(2))))?
            } else {
                0.0
            };
            series.t.push(t);
            series.mean.push(mean);
            series.stderr.push(stderr);
        }
        series.finals = series.mean.last().copied().into_iter().collect();
        Ok(series)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub horizon: u64,
    pub repeats: usize,
    pub series: Vec<Series>,
}

impl AggregateResult {
    pub fn is_empty(&self) -> bool {
        self.series.iter().all(|s| s.t.is_empty())
    }
}

/// Steps at which aggregate curves are sampled: every step up to
/// [`MAX_POINTS`], else `MAX_POINTS` evenly spread steps ending at `T`.
pub fn sample_steps(horizon: u64) -> Vec<u64> {
    let n = MAX_POINTS as u64;
    if horizon <= n {
        (1..=horizon).collect()
    } else {
        (1..=n).map(|i| (i * horizon).div_ceil(n)).collect()
    }
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Default)]
pub struct BatchOptions {
    /// Write every full-length trace to `<dir>/<algorithm>-seed<seed>.csv`.
    pub raw_dir: Option<PathBuf>,
    pub force: bool,
}

/// Thread pool honouring `MPMAB_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MPMAB_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            ConfigError::Parameter(format!(
                "MPMAB_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| ConfigError::Parameter(format!("thread pool: {e}")).into())
}

/// Opens `path` for writing, refusing to replace an existing file unless
/// `force` is set. Parent directories are created.
pub fn create_output(path: &Path, force: bool) -> Result<std::io::BufWriter<std::fs::File>> {
    if path.exists() && !force {
        return Err(Error::WouldOverwrite(path.to_path_buf()));
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(std::io::BufWriter::new(file))
}

/// Runs every algorithm on seeds `seed, seed + 1, ..., seed + repeats - 1`.
///
/// Runs fan out over the pool; results are reduced in (algorithm, repeat)
/// order so the output does not depend on scheduling.
pub fn run_batch(exp: &Experiment, opts: &BatchOptions) -> Result<AggregateResult> {
    let steps = sample_steps(exp.schedule.horizon());
    let jobs: Vec<(usize, Algorithm, u64)> = exp
        .algorithms
        .iter()
        .enumerate()
        .flat_map(|(a, &alg)| {
            (0..exp.repeats as u64).map(move |r| (a, alg, exp.seed.wrapping_add(r)))
        })
        .collect();
    let pool = thread_pool()?;
    let sampled: Vec<Result<Vec<f64>>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(_, alg, seed)| {
                let trace = run(&exp.run_config(alg, seed))?;
                if let Some(dir) = &opts.raw_dir {
                    let path = dir.join(format!("{}-seed{seed}.csv", alg.slug()));
                    let out = create_output(&path, opts.force)?;
                    trace.write_csv(out).map_err(|e| Error::io(&path, e))?;
                }
                Ok(steps.iter().map(|&t| trace.regret_at(t)).collect())
            })
            .collect()
    });
    let mut curves = Vec::with_capacity(sampled.len());
    for s in sampled {
        curves.push(s?);
    }

    let series = exp
        .algorithms
        .iter()
        .enumerate()
        .map(|(a, alg)| {
            let runs = &curves[a * exp.repeats..(a + 1) * exp.repeats];
            let mut mean = Vec::with_capacity(steps.len());
            let mut stderr = Vec::with_capacity(steps.len());
            let mut column = vec![0.0; runs.len()];
            for i in 0..steps.len() {
                for (c, r) in column.iter_mut().zip(runs) {
                    *c = r[i];
                }
                let (m, s) = mean_stderr(&column);
                mean.push(m);
                stderr.push(s);
            }
            Series {
                label: alg.to_string(),
                t: steps.clone(),
                mean,
                stderr,
                finals: runs
                    .iter()
                    .map(|r| r.last().copied().unwrap_or(0.0))
                    .collect(),
            }
        })
        .collect();
    Ok(AggregateResult {
        horizon: exp.schedule.horizon(),
        repeats: exp.repeats,
        series,
    })
}
