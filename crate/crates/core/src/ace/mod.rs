//! Adaptive exploration/exploitation (ACE) for one player.
//!
//! The player works in two-pull cycles. [`AceState::double_selection`] picks the
//! pair of arms, the caller pulls them on two consecutive steps, then hands the
//! feedback to [`AceState::observe_pair`]. Collision history is kept in two
//! queues per arm:
//!
//! * the occupancy queue records `1` when both pulls of a doubled arm collided;
//!   enough ones mark the arm as held by someone else;
//! * the release queue records `1` for each non-collided probe of an arm the
//!   player believes occupied; enough ones mark it as released.
//!
//! Nothing here sees a global clock or another player's state.

mod params;
mod queue;

pub use params::{compute_epsilon, queue_lengths, EpsilonMode, QueueLengths};
pub use queue::BoundedBitQueue;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, PolicyError};
use crate::model::ArmId;
use crate::stats::ArmStats;

/// Scale of the confidence radius `sqrt(6 ln T / N)`.
pub const CONFIDENCE_SCALE: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Exploration,
    Exploitation,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Exploration => "exploration",
            Phase::Exploitation => "exploitation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AceConfig {
    pub num_arms: usize,
    pub m: usize,
    pub horizon: u64,
    pub mode: EpsilonMode,
    /// Overrides the schedule-derived probing probability when set.
    pub epsilon: Option<f64>,
}

impl AceConfig {
    pub fn new(num_arms: usize, m: usize, horizon: u64) -> Self {
        Self {
            num_arms,
            m,
            horizon,
            mode: EpsilonMode::KnownM,
            epsilon: None,
        }
    }

    pub fn with_mode(mut self, mode: EpsilonMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
}

/// What one `observe_*` call changed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObserveReport {
    pub added: Vec<ArmId>,
    pub removed: Vec<ArmId>,
    pub entered_exploitation: Option<ArmId>,
    pub left_exploitation: Option<ArmId>,
    pub correction: Option<bool>,
}

impl ObserveReport {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty()
            && self.removed.is_empty()
            && self.entered_exploitation.is_none()
            && self.left_exploitation.is_none()
            && self.correction.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct AceState {
    num_arms: usize,
    /// `m` in known-m mode, `floor(K/2)` otherwise.
    bound: usize,
    epsilon: f64,
    lengths: QueueLengths,
    log_t: f64,
    phase: Phase,
    exploit_arm: Option<ArmId>,
    occupied: Vec<bool>,
    occupied_count: usize,
    correction: bool,
    p_queues: Vec<BoundedBitQueue>,
    q_queues: Vec<BoundedBitQueue>,
    stats: Vec<ArmStats>,
    pending: Option<(ArmId, ArmId)>,
    local_clock: u64,
}

impl AceState {
    pub fn new(cfg: AceConfig) -> Result<Self, ConfigError> {
        let epsilon = match cfg.epsilon {
            Some(eps) if eps > 0.0 && eps < 1.0 => eps,
            Some(eps) => {
                return Err(ConfigError::Parameter(format!(
                    "epsilon must lie in (0, 1), got {eps}"
                )))
            }
            None => compute_epsilon(cfg.m, cfg.num_arms, cfg.horizon, cfg.mode)?,
        };
        if cfg.num_arms < 2 || cfg.m == 0 || cfg.m > cfg.num_arms / 2 {
            return Err(ConfigError::Parameter(format!(
                "need K >= 2 and 1 <= m <= floor(K/2), got K = {}, m = {}",
                cfg.num_arms, cfg.m
            )));
        }
        let lengths = queue_lengths(cfg.horizon)?;
        let bound = match cfg.mode {
            EpsilonMode::KnownM => cfg.m,
            EpsilonMode::UnknownM => cfg.num_arms / 2,
        };
        let k = cfg.num_arms;
        Ok(Self {
            num_arms: k,
            bound,
            epsilon,
            lengths,
            log_t: (cfg.horizon as f64).ln(),
            phase: Phase::Exploration,
            exploit_arm: None,
            occupied: vec![false; k + 1],
            occupied_count: 0,
            correction: false,
            p_queues: vec![BoundedBitQueue::new(lengths.lp); k + 1],
            q_queues: vec![BoundedBitQueue::new(lengths.lq); k + 1],
            stats: vec![ArmStats::default(); k + 1],
            pending: None,
            local_clock: 0,
        })
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn exploit_arm(&self) -> Option<ArmId> {
        self.exploit_arm
    }

    pub fn correction(&self) -> bool {
        self.correction
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lengths(&self) -> QueueLengths {
        self.lengths
    }

    pub fn log_t(&self) -> f64 {
        self.log_t
    }

    /// Number of pulls this player has been given feedback for.
    pub fn local_clock(&self) -> u64 {
        self.local_clock
    }

    pub fn is_occupied(&self, k: ArmId) -> bool {
        self.occupied[k]
    }

    pub fn occupied(&self) -> Vec<ArmId> {
        (1..=self.num_arms).filter(|&k| self.occupied[k]).collect()
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied_count
    }

    pub fn stats(&self, k: ArmId) -> &ArmStats {
        &self.stats[k]
    }

    /// Statistics of arms `1..=K`, arm 1 first.
    pub fn all_stats(&self) -> &[ArmStats] {
        &self.stats[1..]
    }

    pub fn p_queue(&self, k: ArmId) -> &BoundedBitQueue {
        &self.p_queues[k]
    }

    pub fn q_queue(&self, k: ArmId) -> &BoundedBitQueue {
        &self.q_queues[k]
    }

    pub fn ucb(&self, k: ArmId) -> f64 {
        self.stats[k].upper(CONFIDENCE_SCALE, self.log_t)
    }

    pub fn lcb(&self, k: ArmId) -> f64 {
        self.stats[k].lower(CONFIDENCE_SCALE, self.log_t)
    }

    /// Warm start with prior knowledge of occupied arms. Applies the same
    /// correction trigger as a detected occupancy.
    pub fn seed_occupied(&mut self, arms: &[ArmId]) {
        for &k in arms {
            if !self.occupied[k] && self.exploit_arm != Some(k) {
                self.occupied[k] = true;
                self.occupied_count += 1;
            }
        }
        if self.phase == Phase::Exploration && self.occupied_count > self.bound - 1 {
            self.correction = true;
        }
    }

    fn nth_free(&self, idx: usize) -> ArmId {
        (1..=self.num_arms)
            .filter(|&k| !self.occupied[k])
            .nth(idx)
            .expect("index below the free-arm count")
    }

    fn nth_occupied(&self, idx: usize) -> ArmId {
        (1..=self.num_arms)
            .filter(|&k| self.occupied[k])
            .nth(idx)
            .expect("index below the occupied count")
    }

    fn uniform_occupied<R: Rng + ?Sized>(&self, rng: &mut R) -> ArmId {
        self.nth_occupied(rng.random_range(0..self.occupied_count))
    }

    /// Chooses the next two pulls. One `Bernoulli(epsilon)` draw per call,
    /// made before any arm draw.
    pub fn double_selection<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<(ArmId, ArmId), PolicyError> {
        let probe = rng.random_bool(self.epsilon);
        let pair = match (self.phase, self.exploit_arm) {
            (Phase::Exploration, _) if !self.correction => {
                let free = self.num_arms - self.occupied_count;
                let k1 = self.nth_free(rng.random_range(0..free));
                let k2 = if probe && self.occupied_count > 0 {
                    self.uniform_occupied(rng)
                } else {
                    k1
                };
                (k1, k2)
            }
            (Phase::Exploration, _) => {
                if self.occupied_count == 0 {
                    return Err(PolicyError::EmptyCorrection);
                }
                (self.uniform_occupied(rng), self.uniform_occupied(rng))
            }
            (Phase::Exploitation, Some(hat)) => {
                let k2 = if probe && self.occupied_count > 0 {
                    self.uniform_occupied(rng)
                } else {
                    hat
                };
                (hat, k2)
            }
            (Phase::Exploitation, None) => unreachable!("exploitation without an exploit arm"),
        };
        self.pending = Some(pair);
        Ok(pair)
    }

    /// The committed pair, if a cycle is in flight.
    pub fn pending(&self) -> Option<(ArmId, ArmId)> {
        self.pending
    }

    fn take_pending(&mut self, k1: ArmId, k2: Option<ArmId>) -> Result<(), PolicyError> {
        let (e1, e2) = self.pending.ok_or(PolicyError::NoPendingSelection)?;
        if e1 != k1 {
            return Err(PolicyError::FeedbackMismatch {
                expected: e1,
                got: k1,
            });
        }
        if let Some(k2) = k2 {
            if e2 != k2 {
                return Err(PolicyError::FeedbackMismatch {
                    expected: e2,
                    got: k2,
                });
            }
        }
        self.pending = None;
        Ok(())
    }

    /// Processes the feedback of a completed cycle.
    #[allow(clippy::too_many_arguments)]
    pub fn observe_pair(
        &mut self,
        k1: ArmId,
        collided1: bool,
        reward1: f64,
        k2: ArmId,
        collided2: bool,
        reward2: f64,
    ) -> Result<ObserveReport, PolicyError> {
        self.take_pending(k1, Some(k2))?;
        self.local_clock += 2;
        let mut report = ObserveReport::default();
        let exploring = self.phase == Phase::Exploration;

        self.push_release_bit(k1, collided1);
        self.push_release_bit(k2, collided2);

        if exploring {
            self.record_exploration(k1, collided1, reward1);
            self.record_exploration(k2, collided2, reward2);
            if k1 == k2 {
                self.p_queues[k1].push(collided1 && collided2);
            }
            self.detect_occupied(&mut report);
        }
        self.detect_released(exploring, &mut report);

        if exploring
            && !self.correction
            && k1 == k2
            && !collided1
            && !collided2
            && !self.occupied[k1]
            && self.dominates_free_arms(k1)
        {
            self.phase = Phase::Exploitation;
            self.exploit_arm = Some(k1);
            report.entered_exploitation = Some(k1);
        }
        Ok(report)
    }

    /// Processes a cycle cut short after its first pull (the player's window
    /// closed). Only the single-step updates apply: the release-queue push and
    /// the exploration statistics. Nothing that needs both pulls runs.
    pub fn observe_single(
        &mut self,
        k1: ArmId,
        collided1: bool,
        reward1: f64,
    ) -> Result<ObserveReport, PolicyError> {
        self.take_pending(k1, None)?;
        self.local_clock += 1;
        self.push_release_bit(k1, collided1);
        if self.phase == Phase::Exploration {
            self.record_exploration(k1, collided1, reward1);
        }
        Ok(ObserveReport::default())
    }

    fn push_release_bit(&mut self, k: ArmId, collided: bool) {
        if self.occupied[k] {
            self.q_queues[k].push(!collided);
        }
    }

    fn record_exploration(&mut self, k: ArmId, collided: bool, reward: f64) {
        if !collided && !self.occupied[k] {
            self.stats[k].record(reward);
        }
    }

    fn detect_occupied(&mut self, report: &mut ObserveReport) {
        for k in 1..=self.num_arms {
            if !self.occupied[k] && self.p_queues[k].sum() >= self.lengths.thr_p {
                self.occupied[k] = true;
                self.occupied_count += 1;
                self.p_queues[k].reset();
                report.added.push(k);
                if self.occupied_count > self.bound - 1 && !self.correction {
                    self.correction = true;
                    report.correction = Some(true);
                }
            }
        }
    }

    fn detect_released(&mut self, exploring: bool, report: &mut ObserveReport) {
        for k in 1..=self.num_arms {
            if !(self.occupied[k] && self.q_queues[k].sum() >= self.lengths.thr_q) {
                continue;
            }
            self.occupied[k] = false;
            self.occupied_count -= 1;
            self.q_queues[k].reset();
            report.removed.push(k);
            if exploring {
                if self.occupied_count < self.bound && self.correction {
                    self.correction = false;
                    report.correction = Some(false);
                }
            } else if let Some(hat) = self.exploit_arm {
                if self.lcb(hat) < self.ucb(k) {
                    self.exploit_arm = None;
                    self.phase = Phase::Exploration;
                    report.left_exploitation = Some(hat);
                }
            }
        }
    }

    /// `LCB(k) >= UCB(l)` for every other arm `l` outside the occupied set.
    fn dominates_free_arms(&self, k: ArmId) -> bool {
        let lower = self.lcb(k);
        (1..=self.num_arms)
            .filter(|&l| l != k && !self.occupied[l])
            .all(|l| lower >= self.ucb(l))
    }

    /// Structural invariants; `Err` names the first one broken.
    pub fn check_invariants(&self) -> Result<(), String> {
        match (self.phase, self.exploit_arm) {
            (Phase::Exploitation, Some(k)) if k >= 1 && k <= self.num_arms => {
                if self.occupied[k] {
                    return Err(format!("exploit arm {k} is in the occupied set"));
                }
            }
            (Phase::Exploration, None) => {}
            (phase, arm) => return Err(format!("phase {phase:?} with exploit arm {arm:?}")),
        }
        if self.correction && self.occupied_count < self.bound {
            return Err(format!(
                "correction with only {} occupied arms",
                self.occupied_count
            ));
        }
        let counted = self.occupied.iter().filter(|&&b| b).count();
        if counted != self.occupied_count {
            return Err("occupied count out of sync".into());
        }
        // A free arm may sit at the occupancy threshold: a correction-mode pair
        // can fill the P-queue of an occupied arm released in the same cycle.
        for k in 1..=self.num_arms {
            if self.occupied[k] && self.q_queues[k].sum() >= self.lengths.thr_q {
                return Err(format!("occupied arm {k} left at the release threshold"));
            }
            if !self.occupied[k] && !self.q_queues[k].is_empty() {
                return Err(format!("free arm {k} has release history"));
            }
        }
        Ok(())
    }
}
