//! Selfish UCB baselines.
//!
//! Every player runs its own single-player UCB on its collision-filtered
//! rewards, one arm per step:
//!
//! ```text
//! UCB(c):    mu_k + sqrt(c ln T / N_k)
//! RD-UCB(c): mu_k + sqrt(c ln T / N_k) + Z_k / t,   Z_k ~ N(0, 1) fresh each step
//! ```
//!
//! `T` is the horizon, not the elapsed time, and `t` counts the player's own
//! steps since it joined.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::ConfigError;
use crate::model::ArmId;
use crate::stats::ArmStats;

#[derive(Debug, Clone)]
pub struct UcbState {
    stats: Vec<ArmStats>,
    c: f64,
    log_t: f64,
    randomized: bool,
    local_clock: u64,
}

impl UcbState {
    pub fn new(
        num_arms: usize,
        c: f64,
        horizon: u64,
        randomized: bool,
    ) -> Result<Self, ConfigError> {
        if num_arms < 2 {
            return Err(ConfigError::TooFewArms(num_arms));
        }
        if c.is_nan() || c <= 0.0 {
            return Err(ConfigError::Parameter(format!(
                "UCB constant must be > 0, got {c}"
            )));
        }
        if horizon < 2 {
            return Err(ConfigError::Parameter(format!(
                "horizon must be at least 2, got {horizon}"
            )));
        }
        Ok(Self {
            stats: vec![ArmStats::default(); num_arms],
            c,
            log_t: (horizon as f64).ln(),
            randomized,
            local_clock: 0,
        })
    }

    pub fn selfish(num_arms: usize, c: f64, horizon: u64) -> Result<Self, ConfigError> {
        Self::new(num_arms, c, horizon, false)
    }

    pub fn randomized(num_arms: usize, c: f64, horizon: u64) -> Result<Self, ConfigError> {
        Self::new(num_arms, c, horizon, true)
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn local_clock(&self) -> u64 {
        self.local_clock
    }

    pub fn is_randomized(&self) -> bool {
        self.randomized
    }

    /// Deterministic part of the index for arm `k`.
    pub fn index(&self, k: ArmId) -> f64 {
        self.stats[k - 1].upper(self.c, self.log_t)
    }

    /// Picks the arm with the largest index. In the randomized variant one
    /// standard normal is drawn per arm, arm 1 first, on every call.
    pub fn select<R: Rng + ?Sized>(&mut self, rng: &mut R) -> ArmId {
        let step = (self.local_clock + 1) as f64;
        let indices: Vec<f64> = (1..=self.stats.len())
            .map(|k| {
                let base = self.index(k);
                if self.randomized {
                    let z: f64 = rng.sample(StandardNormal);
                    base + z / step
                } else {
                    base
                }
            })
            .collect();
        argmax_lowest(&indices)
    }

    /// Collided pulls advance the clock but leave the statistics alone.
    pub fn feedback(&mut self, arm: ArmId, collided: bool, reward: f64) {
        if !collided {
            self.stats[arm - 1].record(reward);
        }
        self.local_clock += 1;
    }
}

/// 1-based position of the largest value; ties go to the lowest position,
/// including ties between infinities.
pub fn argmax_lowest(values: &[f64]) -> ArmId {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best + 1
}
