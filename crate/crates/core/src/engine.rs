//! Global-clock driver.
//!
//! Each step the engine asks every active player for an arm, resolves
//! collisions across all of them, charges the step's pseudo-regret, and returns
//! each player its own feedback. Players that select two arms at once (ACE)
//! pull them on two consecutive steps of their own window; cycles therefore
//! anchor at each player's arrival and are not aligned across players.
//!
//! A cycle that would run past the player's last active step (her departure or
//! the horizon) is cut after its first pull and the policy is told via
//! [`Policy::truncate`].

use std::io::Write;

use crate::ace::{AceConfig, EpsilonMode, Phase};
use crate::baselines::UcbState;
use crate::error::{ConfigError, Error, Result};
use crate::model::{
    resolve_step, step_regret, validate, ArmId, BanditEnv, PlayerId, PullRecord, Schedule, Warning,
};
use crate::policy::{
    phase_after, AcePolicy, Algorithm, Feedback, FixedArmPolicy, Policy, PolicyEvent, Selection,
    UcbPolicy,
};
use crate::rng::{stream, StreamRng, ENV_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Abort with [`Error::ExploitationConflict`] on the first conflict
    /// instead of only recording it.
    pub strict_conflicts: bool,
    /// Keep every step's pull records.
    pub record_actions: bool,
    /// Count `(t, player, arm)` estimates outside their confidence radius.
    pub track_concentration: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            strict_conflicts: true,
            record_actions: false,
            track_concentration: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub env: BanditEnv,
    pub schedule: Schedule,
    /// One entry per player, player 1 first.
    pub policies: Vec<Algorithm>,
    pub m: usize,
    pub epsilon_mode: EpsilonMode,
    /// Overrides the probing probability of every ACE player.
    pub epsilon: Option<f64>,
    pub master_seed: u64,
    pub options: RunOptions,
}

impl RunConfig {
    /// Every player runs `algorithm`; `m` defaults to the schedule's peak.
    pub fn uniform(
        env: BanditEnv,
        schedule: Schedule,
        algorithm: Algorithm,
        master_seed: u64,
    ) -> Self {
        let m = schedule.max_active().max(1);
        let policies = vec![algorithm; schedule.num_players()];
        Self {
            env,
            schedule,
            policies,
            m,
            epsilon_mode: EpsilonMode::KnownM,
            epsilon: None,
            master_seed,
            options: RunOptions::default(),
        }
    }

    fn build_policy(&self, algorithm: Algorithm) -> Result<Box<dyn Policy>, ConfigError> {
        let k = self.env.num_arms();
        let horizon = self.schedule.horizon();
        Ok(match algorithm {
            Algorithm::Ace => {
                let mut cfg = AceConfig::new(k, self.m, horizon).with_mode(self.epsilon_mode);
                cfg.epsilon = self.epsilon;
                Box::new(AcePolicy::new(cfg)?)
            }
            Algorithm::Ucb { c } => Box::new(UcbPolicy::new(UcbState::selfish(k, c, horizon)?)),
            Algorithm::RdUcb { c } => {
                Box::new(UcbPolicy::new(UcbState::randomized(k, c, horizon)?))
            }
            Algorithm::Fixed { arm } => {
                if arm == 0 || arm > k {
                    return Err(ConfigError::Parameter(format!(
                        "fixed arm {arm} outside 1..={k}"
                    )));
                }
                Box::new(FixedArmPolicy::new(arm))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseChange {
    /// First step at which the new phase applies.
    pub t: u64,
    pub player: PlayerId,
    pub phase: Phase,
    pub exploit_arm: Option<ArmId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionKind {
    OccupiedAdded,
    ReleasedRemoved,
}

impl DetectionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DetectionKind::OccupiedAdded => "occupied-added",
            DetectionKind::ReleasedRemoved => "released-removed",
        }
    }
}

/// A change to one player's occupied-arm estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    /// First step at which the updated estimate applies.
    pub t: u64,
    pub player: PlayerId,
    pub arm: ArmId,
    pub kind: DetectionKind,
    /// Steps since the arm became occupied (or released) or since the player
    /// joined, whichever is later. `None` when the arm was not actually in
    /// that state, i.e. a false detection.
    pub latency: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub t: u64,
    pub arm: ArmId,
    pub players: Vec<PlayerId>,
}

/// Everything recorded by one run. Per-step arrays have length `T`; index
/// `t - 1` holds step `t`.
#[derive(Debug, Clone, Default)]
pub struct RegretTrace {
    pub cum_regret: Vec<f64>,
    pub collisions: Vec<u32>,
    pub active_players: Vec<u32>,
    pub phases: Vec<PhaseChange>,
    pub detections: Vec<Detection>,
    pub conflicts: Vec<Conflict>,
    /// Steps at which an exploiting player had missed her exploit arm on two
    /// consecutive steps.
    pub exploit_gaps: u64,
    /// Cycles cut short by the end of a player's window.
    pub truncated_cycles: u64,
    pub concentration_violations: u64,
    pub warnings: Vec<Warning>,
    /// Per step, the records of the active players (when requested).
    pub actions: Option<Vec<Vec<PullRecord>>>,
}

impl RegretTrace {
    pub fn horizon(&self) -> u64 {
        self.cum_regret.len() as u64
    }

    pub fn final_regret(&self) -> f64 {
        self.cum_regret.last().copied().unwrap_or(0.0)
    }

    /// Cumulative regret at step `t` (0 for `t = 0`).
    pub fn regret_at(&self, t: u64) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.cum_regret[(t - 1) as usize]
        }
    }

    /// `t,cum_regret,collisions,active_players`, one row per step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,cum_regret,collisions,active_players")?;
        for (i, r) in self.cum_regret.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                i + 1,
                r,
                self.collisions[i],
                self.active_players[i]
            )?;
        }
        out.flush()
    }

    /// `t,player,phase,exploit_arm`, one row per phase change (and one per
    /// arrival of a phased player). `exploit_arm` is 0 while exploring.
    pub fn write_phase_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,player,phase,exploit_arm")?;
        for p in &self.phases {
            writeln!(
                out,
                "{},{},{},{}",
                p.t,
                p.player,
                p.phase.as_str(),
                p.exploit_arm.unwrap_or(0)
            )?;
        }
        out.flush()
    }

    /// `t,player,arm,event,latency`; latency is empty for false detections.
    pub fn write_detection_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,player,arm,event,latency")?;
        for d in &self.detections {
            let latency = d.latency.map(|l| l.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{}",
                d.t,
                d.player,
                d.arm,
                d.kind.as_str(),
                latency
            )?;
        }
        out.flush()
    }
}

struct Player {
    id: PlayerId,
    start: u64,
    last: u64,
    policy: Box<dyn Policy>,
    rng: StreamRng,
    cycle: Option<(Selection, usize)>,
    exploit_arm: Option<ArmId>,
    missed_exploit_arm: bool,
}

/// Ground-truth occupancy, reconstructed from the players' own reports.
struct Occupancy {
    holders: Vec<Vec<PlayerId>>,
    occupied_since: Vec<Option<u64>>,
    released_since: Vec<Option<u64>>,
}

impl Occupancy {
    fn new(num_arms: usize) -> Self {
        Self {
            holders: vec![Vec::new(); num_arms + 1],
            occupied_since: vec![None; num_arms + 1],
            released_since: vec![None; num_arms + 1],
        }
    }

    fn hold(&mut self, arm: ArmId, player: PlayerId, t: u64) -> Option<Conflict> {
        let holders = &mut self.holders[arm];
        if holders.is_empty() {
            self.occupied_since[arm] = Some(t);
            self.released_since[arm] = None;
        }
        holders.push(player);
        (holders.len() > 1).then(|| Conflict {
            t,
            arm,
            players: holders.clone(),
        })
    }

    fn release(&mut self, arm: ArmId, player: PlayerId, t: u64) {
        let holders = &mut self.holders[arm];
        holders.retain(|&p| p != player);
        if holders.is_empty() {
            self.occupied_since[arm] = None;
            self.released_since[arm] = Some(t);
        }
    }

    fn held_by_other(&self, arm: ArmId, player: PlayerId) -> bool {
        self.holders[arm].iter().any(|&p| p != player)
    }
}

struct Run<'a> {
    config: &'a RunConfig,
    trace: RegretTrace,
    occupancy: Occupancy,
    events: Vec<PolicyEvent>,
}

impl Run<'_> {
    /// Applies a player's reported events; `t` is the first step they affect.
    fn apply_events(&mut self, player: &mut Player, t: u64) -> Result<()> {
        for event in std::mem::take(&mut self.events) {
            if let Some((phase, arm)) = phase_after(&event) {
                if let Some(old) = player.exploit_arm.take() {
                    self.occupancy.release(old, player.id, t);
                }
                if let Some(k) = arm {
                    player.exploit_arm = Some(k);
                    player.missed_exploit_arm = false;
                    if let Some(conflict) = self.occupancy.hold(k, player.id, t) {
                        if self.config.options.strict_conflicts {
                            return Err(Error::ExploitationConflict {
                                t,
                                arm: k,
                                first: conflict.players[0],
                                second: conflict.players[1],
                            });
                        }
                        self.trace.conflicts.push(conflict);
                    }
                }
                self.trace.phases.push(PhaseChange {
                    t,
                    player: player.id,
                    phase,
                    exploit_arm: arm,
                });
                continue;
            }
            let (arm, kind, truth) = match event {
                PolicyEvent::OccupiedAdded(k) => (
                    k,
                    DetectionKind::OccupiedAdded,
                    self.occupancy
                        .held_by_other(k, player.id)
                        .then(|| self.occupancy.occupied_since[k])
                        .flatten(),
                ),
                PolicyEvent::OccupiedRemoved(k) => (
                    k,
                    DetectionKind::ReleasedRemoved,
                    self.occupancy.released_since[k],
                ),
                _ => continue,
            };
            self.trace.detections.push(Detection {
                t,
                player: player.id,
                arm,
                kind,
                latency: truth.map(|since| t - since.max(player.start)),
            });
        }
        Ok(())
    }
}

/// Runs one simulation.
pub fn run(config: &RunConfig) -> Result<RegretTrace> {
    let env = &config.env;
    let sched = &config.schedule;
    let horizon = sched.horizon();
    if config.policies.len() != sched.num_players() {
        return Err(ConfigError::Parameter(format!(
            "{} policies for {} players",
            config.policies.len(),
            sched.num_players()
        ))
        .into());
    }
    let report = validate(env, sched, config.m);
    if !report.is_ok() {
        return Err(ConfigError::Validation(report).into());
    }

    let mut players = Vec::with_capacity(sched.num_players());
    for j in sched.players() {
        let iv = sched.interval(j);
        players.push(Player {
            id: j,
            start: iv.start,
            last: iv.end.min(horizon),
            policy: config.build_policy(config.policies[j - 1])?,
            rng: stream(config.master_seed, j as u64),
            cycle: None,
            exploit_arm: None,
            missed_exploit_arm: false,
        });
    }
    let mut arrivals: Vec<usize> = (0..players.len()).collect();
    arrivals.sort_by_key(|&i| (players[i].start, i));
    let mut next_arrival = 0;

    let mut env_rng = stream(config.master_seed, ENV_STREAM);
    let steps = horizon as usize;
    let mut run = Run {
        config,
        trace: RegretTrace {
            cum_regret: Vec::with_capacity(steps),
            collisions: Vec::with_capacity(steps),
            active_players: Vec::with_capacity(steps),
            warnings: report.warnings,
            actions: config
                .options
                .record_actions
                .then(|| Vec::with_capacity(steps)),
            ..Default::default()
        },
        occupancy: Occupancy::new(env.num_arms()),
        events: Vec::new(),
    };

    let mut active: Vec<usize> = Vec::new();
    let mut choices: Vec<(PlayerId, Option<ArmId>)> = Vec::new();
    let mut cum = 0.0;
    let radius_log = horizon as f64;
    let radius_log = radius_log.ln();

    for t in 1..=horizon {
        let mut joined = false;
        while next_arrival < arrivals.len() && players[arrivals[next_arrival]].start <= t {
            let idx = arrivals[next_arrival];
            next_arrival += 1;
            let p = &mut players[idx];
            if p.start != t {
                continue; // starts outside [1, T] never validate
            }
            if p.policy.has_phases() {
                run.trace.phases.push(PhaseChange {
                    t,
                    player: p.id,
                    phase: Phase::Exploration,
                    exploit_arm: None,
                });
            }
            p.policy.on_join(&mut run.events);
            run.apply_events(p, t)?;
            active.push(idx);
            joined = true;
        }
        if joined {
            active.sort_unstable();
        }

        choices.clear();
        for &idx in &active {
            let p = &mut players[idx];
            let (selection, pos) = match p.cycle {
                Some(c) => c,
                None => {
                    let s = p
                        .policy
                        .select(&mut p.rng)
                        .map_err(|source| Error::Policy {
                            player: p.id,
                            source,
                        })?;
                    (s, 0)
                }
            };
            p.cycle = Some((selection, pos));
            let arm = selection.arm(pos);
            if let Some(hat) = p.exploit_arm {
                if arm == hat {
                    p.missed_exploit_arm = false;
                } else if std::mem::replace(&mut p.missed_exploit_arm, true) {
                    run.trace.exploit_gaps += 1;
                }
            }
            choices.push((p.id, Some(arm)));
        }

        let outcome = resolve_step(env, &choices, &mut env_rng)?;
        cum += step_regret(env, active.len(), outcome.successes().map(|(_, k)| k));
        run.trace.cum_regret.push(cum);
        run.trace.collisions.push(outcome.collisions() as u32);
        run.trace.active_players.push(active.len() as u32);

        let mut departed = false;
        for (&idx, rec) in active.iter().zip(&outcome.records) {
            let p = &mut players[idx];
            let (selection, pos) = p.cycle.expect("selected this step");
            let fb = Feedback {
                index: pos,
                arm: rec.arm.expect("active players pull"),
                collided: rec.collided,
                reward: rec.reward,
            };
            p.policy
                .feedback(fb, &mut run.events)
                .map_err(|source| Error::Policy {
                    player: p.id,
                    source,
                })?;
            if pos + 1 == selection.len() {
                p.cycle = None;
            } else if t == p.last {
                p.policy
                    .truncate(&mut run.events)
                    .map_err(|source| Error::Policy {
                        player: p.id,
                        source,
                    })?;
                run.trace.truncated_cycles += 1;
                p.cycle = None;
            } else {
                p.cycle = Some((selection, pos + 1));
            }
            run.apply_events(p, t + 1)?;
            if t == p.last {
                if let Some(k) = p.exploit_arm.take() {
                    run.occupancy.release(k, p.id, t + 1);
                }
                departed = true;
            }
        }

        if config.options.track_concentration {
            for &idx in &active {
                if let Some(stats) = players[idx].policy.estimates() {
                    for (i, s) in stats.iter().enumerate() {
                        if let Some(mu) = s.mean() {
                            let radius = s.radius(crate::ace::CONFIDENCE_SCALE, radius_log);
                            if (mu - env.mean(i + 1)).abs() > radius {
                                run.trace.concentration_violations += 1;
                            }
                        }
                    }
                }
            }
        }

        if let Some(actions) = run.trace.actions.as_mut() {
            actions.push(outcome.records);
        }
        if departed {
            active.retain(|&idx| players[idx].last != t);
        }
    }
    Ok(run.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ArmDist;

    fn env(means: &[f64]) -> BanditEnv {
        BanditEnv::from_means(means, ArmDist::Gaussian { sigma: 0.1 }).unwrap()
    }

    #[test]
    fn disjoint_windows_never_collide() {
        let sched = Schedule::from_pairs(&[(1, 400), (401, 1000)], 1000);
        let cfg = RunConfig::uniform(env(&[0.9, 0.5, 0.3, 0.1]), sched, Algorithm::Ace, 4);
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.collisions.iter().sum::<u32>(), 0);
        assert_eq!(trace.cum_regret.len(), 1000);
        assert!(trace.active_players.iter().all(|&a| a == 1));
    }

    #[test]
    fn identical_configs_give_identical_traces() {
        let sched = Schedule::from_pairs(&[(1, 500), (20, 800), (100, 800)], 800);
        let mut cfg = RunConfig::uniform(
            BanditEnv::gaussian_ladder(6, 0.1, 0.05, 0.5).unwrap(),
            sched,
            Algorithm::Ace,
            11,
        );
        cfg.options.record_actions = true;
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.cum_regret, b.cum_regret);
        assert_eq!(a.actions, b.actions);
        let mut other = cfg.clone();
        other.master_seed = 12;
        assert_ne!(run(&other).unwrap().actions, a.actions);
    }

    #[test]
    fn odd_window_truncates_the_last_cycle() {
        // Window [1, 5]: cycles (1,2), (3,4), then a cut cycle at 5.
        let sched = Schedule::from_pairs(&[(1, 5)], 10);
        let mut cfg = RunConfig::uniform(env(&[0.9, 0.1]), sched, Algorithm::Ace, 0);
        cfg.options.record_actions = true;
        let trace = run(&cfg).unwrap();
        let actions = trace.actions.unwrap();
        assert_eq!(actions.iter().filter(|s| !s.is_empty()).count(), 5);
        // With nothing occupied, each cycle repeats its arm.
        assert_eq!(actions[0][0].arm, actions[1][0].arm);
        assert_eq!(actions[2][0].arm, actions[3][0].arm);
        assert!(actions[5..].iter().all(|s| s.is_empty()));
        assert_eq!(trace.truncated_cycles, 1);
    }

    #[test]
    fn regret_is_charged_for_idle_optimal_arms() {
        // A single fixed player on the worst arm pays mu_1 - mu_2 every step.
        let sched = Schedule::from_pairs(&[(1, 10)], 10);
        let cfg = RunConfig::uniform(env(&[0.9, 0.5]), sched, Algorithm::Fixed { arm: 2 }, 0);
        let trace = run(&cfg).unwrap();
        assert!((trace.final_regret() - 4.0).abs() < 1e-9);
        assert_eq!(trace.phases.len(), 2);
        assert_eq!(trace.phases[1].exploit_arm, Some(2));
    }

    #[test]
    fn two_scripted_exploiters_on_one_arm_conflict() {
        let sched = Schedule::from_pairs(&[(1, 10), (5, 10)], 10);
        let mut cfg = RunConfig::uniform(
            env(&[0.9, 0.5, 0.3, 0.2]),
            sched,
            Algorithm::Fixed { arm: 1 },
            0,
        );
        assert!(matches!(
            run(&cfg),
            Err(Error::ExploitationConflict { t: 5, arm: 1, .. })
        ));
        cfg.options.strict_conflicts = false;
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.conflicts.len(), 1);
        assert_eq!(trace.conflicts[0].players, vec![1, 2]);
    }

    #[test]
    fn invalid_bound_is_rejected_before_running() {
        let sched = Schedule::from_pairs(&[(1, 10), (1, 10), (1, 10)], 10);
        let cfg = RunConfig::uniform(env(&[0.9, 0.5, 0.3, 0.2]), sched, Algorithm::Ace, 0);
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, Error::Config(ConfigError::Validation(_))));
        assert!(err.to_string().contains("K/2"));
    }

    #[test]
    fn single_ace_player_settles_on_the_best_arm() {
        let sched = Schedule::from_pairs(&[(1, 100_000)], 100_000);
        let cfg = RunConfig::uniform(env(&[0.9, 0.1]), sched, Algorithm::Ace, 2);
        let trace = run(&cfg).unwrap();
        assert!(
            trace.final_regret() < 0.8 * 100_000.0 * 0.05,
            "{}",
            trace.final_regret()
        );
        let last = trace.phases.last().unwrap();
        assert_eq!(last.exploit_arm, Some(1));
        assert_eq!(trace.exploit_gaps, 0);
    }
}
