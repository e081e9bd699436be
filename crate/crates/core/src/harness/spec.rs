//! Experiment description files (JSON).
//!
//! ```json
//! {
//!   "env": { "K": 20, "dist": "gaussian", "mu_min": 0.1, "gap": 0.05, "sigma": 0.5 },
//!   "schedule": { "preset": { "id": "table2b", "scale": 0.1 } },
//!   "algorithms": ["ace", "ucb(2.0)", "rd-ucb(2.0)"],
//!   "repeats": 10,
//!   "seed": 0
//! }
//! ```
//!
//! `env` may list `means` instead of the ladder fields. `schedule` is one of
//! `{"preset": {"id", "scale"?}}`, `{"random": {"players"}}` or
//! `{"file": {"path"}}`; relative paths resolve against the spec's directory.
//! `T` is required for random schedules; for presets it implies the scale.
//! `m` defaults to the schedule's peak number of active players.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ace::EpsilonMode;
use crate::engine::{RunConfig, RunOptions};
use crate::error::{ConfigError, Error, Result};
use crate::harness::presets::{preset_schedule, PRESET_HORIZON};
use crate::harness::schedule::{generate_random_schedule, read_schedule};
use crate::model::{ArmDist, BanditEnv, Schedule};
use crate::policy::Algorithm;
use crate::rng::{stream, HARNESS_STREAM};

pub const DEFAULT_REPEATS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistName {
    #[default]
    Gaussian,
    Bernoulli,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvRecipe {
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub num_arms: Option<usize>,
    #[serde(default)]
    pub dist: DistName,
    #[serde(default = "default_mu_min")]
    pub mu_min: f64,
    #[serde(default = "default_gap")]
    pub gap: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Vec<f64>>,
}

fn default_mu_min() -> f64 {
    0.1
}
fn default_gap() -> f64 {
    0.05
}
fn default_sigma() -> f64 {
    0.5
}
fn default_repeats() -> usize {
    DEFAULT_REPEATS
}

impl EnvRecipe {
    pub fn ladder(num_arms: usize) -> Self {
        Self {
            num_arms: Some(num_arms),
            dist: DistName::Gaussian,
            mu_min: default_mu_min(),
            gap: default_gap(),
            sigma: default_sigma(),
            means: None,
        }
    }

    pub fn build(&self) -> Result<BanditEnv, ConfigError> {
        let dist = match self.dist {
            DistName::Gaussian => ArmDist::Gaussian { sigma: self.sigma },
            DistName::Bernoulli => ArmDist::Bernoulli,
        };
        let means = match (&self.means, self.num_arms) {
            (Some(means), Some(k)) if means.len() != k => {
                return Err(ConfigError::Parameter(format!(
                    "K = {k} but {} means listed",
                    means.len()
                )))
            }
            (Some(means), _) => means.clone(),
            (None, Some(k)) => (1..=k)
                .map(|i| self.mu_min + (k - i) as f64 * self.gap)
                .collect(),
            (None, None) => return Err(ConfigError::Parameter("env needs `K` or `means`".into())),
        };
        BanditEnv::from_means(&means, dist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSource {
    Preset {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    Random {
        players: usize,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub env: EnvRecipe,
    pub schedule: ScheduleSource,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub epsilon_mode: EpsilonMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
}

/// A spec with its environment and schedule materialized.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub env: BanditEnv,
    pub schedule: Schedule,
    pub algorithms: Vec<Algorithm>,
    pub m: usize,
    pub epsilon_mode: EpsilonMode,
    pub epsilon: Option<f64>,
    pub repeats: usize,
    pub seed: u64,
    pub options: RunOptions,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Malformed {
            what: "experiment spec",
            detail: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_json(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    fn schedule(&self, base: &Path) -> Result<Schedule> {
        match &self.schedule {
            ScheduleSource::Preset { id, scale } => {
                let table = preset_schedule(id)?;
                let implied = self.horizon.map(|t| t as f64 / PRESET_HORIZON as f64);
                let scale = match (scale, implied) {
                    (Some(s), Some(i)) if (s - i).abs() > 1e-12 => {
                        return Err(ConfigError::Parameter(format!(
                            "preset scale {s} disagrees with T = {}",
                            self.horizon.unwrap_or_default()
                        ))
                        .into())
                    }
                    (Some(s), _) => *s,
                    (None, Some(i)) => i,
                    (None, None) => 1.0,
                };
                if scale.is_nan() || scale <= 0.0 {
                    return Err(ConfigError::Parameter(format!(
                        "preset scale must be > 0, got {scale}"
                    ))
                    .into());
                }
                Ok(if scale == 1.0 {
                    table
                } else {
                    table.scaled(scale)
                })
            }
            ScheduleSource::Random { players } => {
                let horizon = self
                    .horizon
                    .ok_or_else(|| ConfigError::Parameter("random schedules need `T`".into()))?;
                let mut rng = stream(self.seed, HARNESS_STREAM);
                Ok(generate_random_schedule(horizon, *players, &mut rng)?)
            }
            ScheduleSource::File { path } => {
                let path = base.join(path);
                let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
                Ok(read_schedule(std::io::BufReader::new(file), self.horizon)?)
            }
        }
    }

    /// Builds the environment and schedule. `base` anchors relative paths.
    pub fn resolve(&self, base: &Path) -> Result<Experiment> {
        if self.repeats == 0 {
            return Err(ConfigError::Parameter("repeats must be at least 1".into()).into());
        }
        if self.algorithms.is_empty() {
            return Err(ConfigError::Parameter("no algorithms listed".into()).into());
        }
        let env = self.env.build()?;
        let schedule = self.schedule(base)?;
        let m = self.m.unwrap_or_else(|| schedule.max_active().max(1));
        Ok(Experiment {
            env,
            schedule,
            algorithms: self.algorithms.clone(),
            m,
            epsilon_mode: self.epsilon_mode,
            epsilon: self.epsilon,
            repeats: self.repeats,
            seed: self.seed,
            options: RunOptions::default(),
        })
    }
}

impl Experiment {
    pub fn run_config(&self, algorithm: Algorithm, master_seed: u64) -> RunConfig {
        RunConfig {
            env: self.env.clone(),
            schedule: self.schedule.clone(),
            policies: vec![algorithm; self.schedule.num_players()],
            m: self.m,
            epsilon_mode: self.epsilon_mode,
            epsilon: self.epsilon,
            master_seed,
            options: self.options,
        }
    }
}
