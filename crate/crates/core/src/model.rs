//! Environment, activity schedules, collision resolution and regret accounting.
//!
//! Arms and players are 1-indexed throughout. Time steps are 1-indexed and
//! activity intervals are inclusive on both ends: player `j` is active at `t`
//! iff `start_j <= t <= end_j`.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// 1-based arm index.
pub type ArmId = usize;
/// 1-based player index.
pub type PlayerId = usize;

/// Reward distribution family of a single arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArmDist {
    Gaussian { sigma: f64 },
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSpec {
    mean: f64,
    dist: ArmDist,
}

impl ArmSpec {
    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self, ConfigError> {
        if sigma.is_nan() || sigma < 0.0 || !mean.is_finite() {
            return Err(ConfigError::InvalidArm(format!(
                "gaussian arm needs a finite mean and sigma >= 0 (mean {mean}, sigma {sigma})"
            )));
        }
        Ok(Self {
            mean,
            dist: ArmDist::Gaussian { sigma },
        })
    }

    pub fn bernoulli(mean: f64) -> Result<Self, ConfigError> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(ConfigError::InvalidArm(format!(
                "bernoulli arm mean {mean} outside [0, 1]"
            )));
        }
        Ok(Self {
            mean,
            dist: ArmDist::Bernoulli,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn dist(&self) -> ArmDist {
        self.dist
    }

    /// Draws one reward.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.dist {
            ArmDist::Gaussian { sigma: 0.0 } => self.mean,
            ArmDist::Gaussian { sigma } => Normal::new(self.mean, sigma)
                .expect("sigma validated at construction")
                .sample(rng),
            ArmDist::Bernoulli => {
                if rng.random_bool(self.mean) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// The shared stochastic environment: `K >= 2` arms.
///
/// Strict ordering of the means is checked by [`validate`], not here, so that
/// a mis-ordered config still produces a full violation report.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditEnv {
    arms: Vec<ArmSpec>,
}

impl BanditEnv {
    pub fn new(arms: Vec<ArmSpec>) -> Result<Self, ConfigError> {
        if arms.len() < 2 {
            return Err(ConfigError::TooFewArms(arms.len()));
        }
        Ok(Self { arms })
    }

    /// Gaussian arms with `mu_K = mu_min` and a constant gap between neighbours,
    /// i.e. `mu_k = mu_min + (K - k) * gap`.
    pub fn gaussian_ladder(
        num_arms: usize,
        mu_min: f64,
        gap: f64,
        sigma: f64,
    ) -> Result<Self, ConfigError> {
        let arms = (1..=num_arms)
            .map(|k| ArmSpec::gaussian(mu_min + (num_arms - k) as f64 * gap, sigma))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arms)
    }

    pub fn from_means(means: &[f64], dist: ArmDist) -> Result<Self, ConfigError> {
        let arms = means
            .iter()
            .map(|&mu| match dist {
                ArmDist::Gaussian { sigma } => ArmSpec::gaussian(mu, sigma),
                ArmDist::Bernoulli => ArmSpec::bernoulli(mu),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(arms)
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn arm(&self, k: ArmId) -> &ArmSpec {
        &self.arms[k - 1]
    }

    pub fn mean(&self, k: ArmId) -> f64 {
        self.arms[k - 1].mean
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.mean).collect()
    }

    /// `min_{k <= m} (mu_k - mu_{k+1})`, recomputed on every call.
    pub fn min_gap(&self, m: usize) -> f64 {
        let upto = m.min(self.arms.len() - 1);
        (1..=upto)
            .map(|k| self.mean(k) - self.mean(k + 1))
            .fold(f64::INFINITY, f64::min)
    }

    /// Sum of the `n` largest means (the arms are sorted, so the first `n`).
    pub fn top_sum(&self, n: usize) -> f64 {
        self.arms.iter().take(n).map(|a| a.mean).sum()
    }
}

/// One player's activity interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: u64,
    pub end: u64,
}

impl Interval {
    pub fn contains(&self, t: u64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start) + 1
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

/// Per-player activity intervals over a horizon `T`.
///
/// Player `j` (1-based) owns `entries[j - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    entries: Vec<Interval>,
    horizon: u64,
}

impl Schedule {
    pub fn new(entries: Vec<Interval>, horizon: u64) -> Self {
        Self { entries, horizon }
    }

    pub fn from_pairs(pairs: &[(u64, u64)], horizon: u64) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(start, end)| Interval { start, end })
                .collect(),
            horizon,
        )
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn num_players(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn interval(&self, j: PlayerId) -> Interval {
        self.entries[j - 1]
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        1..=self.entries.len()
    }

    /// `{ j : start_j <= t <= end_j }` in ascending order.
    pub fn active_players(&self, t: u64) -> Vec<PlayerId> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.contains(t))
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// `m_t`.
    pub fn active_count(&self, t: u64) -> usize {
        self.entries.iter().filter(|iv| iv.contains(t)).count()
    }

    /// `max_t m_t` over `[1, T]`, by sweeping interval endpoints.
    pub fn max_active(&self) -> usize {
        let mut events: Vec<(u64, i64)> = Vec::with_capacity(2 * self.entries.len());
        for iv in &self.entries {
            let start = iv.start.max(1);
            let end = iv.end.min(self.horizon);
            if start > end {
                continue;
            }
            events.push((start, 1));
            events.push((end + 1, -1));
        }
        // Departures at t sort before arrivals at t: a player ending at t-1 and
        // one starting at t never overlap.
        events.sort_unstable();
        let mut cur = 0i64;
        let mut best = 0i64;
        for (_, delta) in events {
            cur += delta;
            best = best.max(cur);
        }
        best as usize
    }

    /// Rescales every endpoint, clamping starts to at least 1. Used to run the
    /// published schedules at a shorter horizon.
    pub fn scaled(&self, factor: f64) -> Schedule {
        let map = |x: u64| ((x as f64) * factor).round() as u64;
        let horizon = map(self.horizon).max(1);
        let entries = self
            .entries
            .iter()
            .map(|iv| Interval {
                start: map(iv.start).max(1),
                end: map(iv.end).clamp(1, horizon),
            })
            .collect();
        Schedule::new(entries, horizon)
    }
}

/// A clause of the model assumptions that a configuration breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MeansNotDecreasing {
        arm: ArmId,
        mean: f64,
        next: f64,
    },
    IntervalOutOfRange {
        player: PlayerId,
        start: u64,
        end: u64,
        horizon: u64,
    },
    ActiveExceedsBound {
        max_active: usize,
        m: usize,
    },
    BoundExceedsHalfArms {
        m: usize,
        num_arms: usize,
    },
    ZeroBound,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MeansNotDecreasing { arm, mean, next } => write!(
                f,
                "means must be strictly decreasing: mu_{arm} = {mean} <= mu_{} = {next}",
                arm + 1
            ),
            Violation::IntervalOutOfRange {
                player,
                start,
                end,
                horizon,
            } => write!(
                f,
                "player {player} interval [{start}, {end}] must satisfy 1 <= start <= end <= T = {horizon}"
            ),
            Violation::ActiveExceedsBound { max_active, m } => write!(
                f,
                "active-player bound (m_t <= m <= K/2) violated: {max_active} players active at once but m = {m}"
            ),
            Violation::BoundExceedsHalfArms { m, num_arms } => write!(
                f,
                "active-player bound (m_t <= m <= K/2) violated: m = {m} exceeds floor(K/2) = {}",
                num_arms / 2
            ),
            Violation::ZeroBound => write!(f, "m must be at least 1"),
        }
    }
}

/// Model-validity issues that do not stop a run.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    MeanOutsideUnit { arm: ArmId, mean: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MeanOutsideUnit { arm, mean } => {
                write!(f, "mean exceeds 1 or is negative: mu_{arm} = {mean}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Checks a configuration against the model assumptions.
///
/// Every violated clause is reported. Means outside `[0, 1]` only warn.
pub fn validate(env: &BanditEnv, sched: &Schedule, m: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let means = env.means();
    for (i, pair) in means.windows(2).enumerate() {
        if pair[0].partial_cmp(&pair[1]) != Some(std::cmp::Ordering::Greater) {
            report.violations.push(Violation::MeansNotDecreasing {
                arm: i + 1,
                mean: pair[0],
                next: pair[1],
            });
        }
    }
    for (i, &mean) in means.iter().enumerate() {
        if !(0.0..=1.0).contains(&mean) {
            report
                .warnings
                .push(Warning::MeanOutsideUnit { arm: i + 1, mean });
        }
    }
    for j in sched.players() {
        let iv = sched.interval(j);
        if !(1 <= iv.start && iv.start <= iv.end && iv.end <= sched.horizon()) {
            report.violations.push(Violation::IntervalOutOfRange {
                player: j,
                start: iv.start,
                end: iv.end,
                horizon: sched.horizon(),
            });
        }
    }
    if m == 0 {
        report.violations.push(Violation::ZeroBound);
    }
    let max_active = sched.max_active();
    if max_active > m {
        report
            .violations
            .push(Violation::ActiveExceedsBound { max_active, m });
    }
    if m > env.num_arms() / 2 {
        report.violations.push(Violation::BoundExceedsHalfArms {
            m,
            num_arms: env.num_arms(),
        });
    }
    report
}

/// One player's result for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullRecord {
    pub player: PlayerId,
    /// `None` iff the player is inactive at this step.
    pub arm: Option<ArmId>,
    pub collided: bool,
    pub reward: f64,
}

/// All players' results for one step, in the order the choices were given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepOutcome {
    pub records: Vec<PullRecord>,
}

impl StepOutcome {
    pub fn collisions(&self) -> usize {
        self.records.iter().filter(|r| r.collided).count()
    }

    /// `(player, arm)` for every pull that did not collide.
    pub fn successes(&self) -> impl Iterator<Item = (PlayerId, ArmId)> + '_ {
        self.records
            .iter()
            .filter(|r| !r.collided)
            .filter_map(|r| r.arm.map(|k| (r.player, k)))
    }
}

/// Resolves one step of simultaneous pulls.
///
/// `choices` holds `(player, arm)` for active players and `(player, None)` for
/// inactive ones. A pull collides iff at least two active players chose the same
/// arm; collided pulls earn 0 and draw no sample. Non-collided pulls draw one
/// sample each from `rng`, in the order of `choices`.
pub fn resolve_step<R: Rng + ?Sized>(
    env: &BanditEnv,
    choices: &[(PlayerId, Option<ArmId>)],
    rng: &mut R,
) -> Result<StepOutcome, ConfigError> {
    let num_arms = env.num_arms();
    let mut counts = vec![0u32; num_arms + 1];
    for &(player, arm) in choices {
        if let Some(k) = arm {
            if k == 0 || k > num_arms {
                return Err(ConfigError::ArmOutOfRange {
                    player,
                    arm: k,
                    num_arms,
                });
            }
            counts[k] += 1;
        }
    }
    let records = choices
        .iter()
        .map(|&(player, arm)| match arm {
            None => PullRecord {
                player,
                arm: None,
                collided: false,
                reward: 0.0,
            },
            Some(k) if counts[k] >= 2 => PullRecord {
                player,
                arm: Some(k),
                collided: true,
                reward: 0.0,
            },
            Some(k) => PullRecord {
                player,
                arm: Some(k),
                collided: false,
                reward: env.arm(k).sample(rng),
            },
        })
        .collect();
    Ok(StepOutcome { records })
}

/// Expected pseudo-regret of one step: the top `m_t` means minus the means of
/// the distinct non-collided arms.
pub fn step_regret<I>(env: &BanditEnv, active: usize, successes: I) -> f64
where
    I: IntoIterator<Item = ArmId>,
{
    let earned: f64 = successes.into_iter().map(|k| env.mean(k)).sum();
    let regret = env.top_sum(active) - earned;
    // Float cancellation can leave a -1e-16 residue on optimal steps.
    regret.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn env3() -> BanditEnv {
        BanditEnv::from_means(&[0.9, 0.8, 0.7], ArmDist::Bernoulli).unwrap()
    }

    #[test]
    fn validate_accepts_well_formed_config() {
        let env = BanditEnv::from_means(&[0.9, 0.8, 0.7, 0.6], ArmDist::Bernoulli).unwrap();
        let sched = Schedule::from_pairs(&[(1, 100), (1, 100)], 100);
        let report = validate(&env, &sched, 2);
        assert!(report.is_ok(), "{report}");
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn validate_rejects_bound_above_half_the_arms() {
        let env = BanditEnv::from_means(&[0.9, 0.8, 0.7, 0.6], ArmDist::Bernoulli).unwrap();
        let sched = Schedule::from_pairs(&[(1, 100), (1, 100)], 100);
        let report = validate(&env, &sched, 3);
        assert_eq!(
            report.violations,
            vec![Violation::BoundExceedsHalfArms { m: 3, num_arms: 4 }]
        );
    }

    #[test]
    fn validate_only_warns_on_means_above_one() {
        let env = BanditEnv::gaussian_ladder(20, 0.1, 0.05, 0.5).unwrap();
        assert!((env.mean(1) - 1.05).abs() < 1e-12);
        let sched = Schedule::from_pairs(&[(1, 10); 10], 10);
        let report = validate(&env, &sched, 10);
        assert!(report.is_ok(), "{report}");
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].to_string().contains("mean exceeds 1"));
    }

    #[test]
    fn validate_names_every_clause() {
        let env = BanditEnv::from_means(&[0.5, 0.6, 0.4, 0.3], ArmDist::Bernoulli).unwrap();
        let sched = Schedule::from_pairs(&[(0, 5), (3, 12), (1, 10), (1, 10)], 10);
        let report = validate(&env, &sched, 2);
        let names: Vec<_> = report
            .violations
            .iter()
            .map(std::mem::discriminant)
            .collect();
        assert!(
            names.contains(&std::mem::discriminant(&Violation::MeansNotDecreasing {
                arm: 1,
                mean: 0.,
                next: 0.
            }))
        );
        assert_eq!(
            report
                .violations
                .iter()
                .filter(|v| matches!(v, Violation::IntervalOutOfRange { .. }))
                .count(),
            2
        );
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::ActiveExceedsBound {
                max_active: 4,
                m: 2
            }
        )));
    }

    #[test]
    fn max_active_treats_touching_intervals_as_disjoint() {
        let sched = Schedule::from_pairs(&[(1, 10), (11, 20), (5, 5)], 20);
        assert_eq!(sched.max_active(), 2);
        let sched = Schedule::from_pairs(&[(1, 10), (10, 20)], 20);
        assert_eq!(sched.max_active(), 2);
    }

    #[test]
    fn active_players_before_any_start_is_empty() {
        let sched = Schedule::from_pairs(&[(5, 10), (7, 9)], 10);
        assert!(sched.active_players(4).is_empty());
        assert_eq!(sched.active_players(8), vec![1, 2]);
    }

    #[test]
    fn shared_arm_collides_both() {
        let env = env3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = resolve_step(&env, &[(1, Some(3)), (2, Some(3))], &mut rng).unwrap();
        for r in &out.records {
            assert!(r.collided);
            assert_eq!(r.reward, 0.0);
        }
    }

    #[test]
    fn distinct_arms_and_lone_players_do_not_collide() {
        let env = env3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = resolve_step(&env, &[(1, Some(1)), (2, Some(2)), (3, None)], &mut rng).unwrap();
        assert!(!out.records[0].collided && !out.records[1].collided);
        assert_eq!(out.records[2].arm, None);
        let out = resolve_step(&env, &[(1, Some(1))], &mut rng).unwrap();
        assert!(!out.records[0].collided);
    }

    #[test]
    fn out_of_range_arm_is_a_config_error() {
        let env = env3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(resolve_step(&env, &[(1, Some(4))], &mut rng).is_err());
        assert!(resolve_step(&env, &[(1, Some(0))], &mut rng).is_err());
    }

    /// Brute-force regret straight from the definition: best achievable sum
    /// over any assignment of `m_t` players to distinct arms, minus earned.
    fn regret_by_enumeration(means: &[f64], active: usize, successes: &[ArmId]) -> f64 {
        fn best(means: &[f64], left: usize, from: usize) -> f64 {
            if left == 0 {
                return 0.0;
            }
            (from..means.len())
                .map(|k| means[k] + best(means, left - 1, k + 1))
                .fold(f64::NEG_INFINITY, f64::max)
        }
        best(means, active, 0) - successes.iter().map(|&k| means[k - 1]).sum::<f64>()
    }

    #[test]
    fn step_regret_examples() {
        let env = env3();
        assert_eq!(step_regret(&env, 2, [1, 2]), 0.0);
        assert!((step_regret(&env, 2, [1]) - 0.8).abs() < 1e-12);
        let oracle = regret_by_enumeration(&[0.9, 0.8, 0.7], 2, &[2, 3]);
        assert!((oracle - 0.2).abs() < 1e-12);
        assert!((step_regret(&env, 2, [2, 3]) - oracle).abs() < 1e-12);
    }

    #[test]
    fn step_regret_is_non_negative_exhaustively() {
        // Every subset of distinct arms of size <= m_t, for K <= 4, m_t <= 3.
        for k in 2..=4usize {
            let means: Vec<f64> = (0..k).map(|i| 0.9 - 0.13 * i as f64).collect();
            let env = BanditEnv::from_means(&means, ArmDist::Bernoulli).unwrap();
            for active in 0..=3usize.min(k) {
                for mask in 0u32..(1 << k) {
                    if mask.count_ones() as usize > active {
                        continue;
                    }
                    let arms: Vec<ArmId> = (1..=k).filter(|a| mask & (1 << (a - 1)) != 0).collect();
                    let r = step_regret(&env, active, arms.iter().copied());
                    assert!(r >= 0.0);
                    let oracle = regret_by_enumeration(&means, active, &arms);
                    assert!((r - oracle.max(0.0)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn resolve_step_is_seed_deterministic() {
        let env = BanditEnv::gaussian_ladder(4, 0.1, 0.05, 0.5).unwrap();
        let choices = [(1, Some(1)), (2, Some(2)), (3, Some(2)), (4, Some(4))];
        let a = resolve_step(&env, &choices, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = resolve_step(&env, &choices, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bernoulli_mean_must_be_a_probability() {
        assert!(ArmSpec::bernoulli(1.2).is_err());
        assert!(ArmSpec::gaussian(0.3, -0.1).is_err());
        assert!(BanditEnv::new(vec![ArmSpec::bernoulli(0.5).unwrap()]).is_err());
    }

    #[test]
    fn scaled_table_clamps_starts() {
        let s = Schedule::from_pairs(&[(1, 100_000), (80_000, 2_000_000)], 2_000_000).scaled(0.1);
        assert_eq!(s.horizon(), 200_000);
        assert_eq!(
            s.interval(1),
            Interval {
                start: 1,
                end: 10_000
            }
        );
        assert_eq!(
            s.interval(2),
            Interval {
                start: 8_000,
                end: 200_000
            }
        );
    }
}
