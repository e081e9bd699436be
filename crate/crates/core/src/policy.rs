//! The contract between the simulator and a player's decision rule.
//!
//! A policy only ever sees its own pulls: which arm it played, whether it
//! collided, and the reward. It never learns the global step, the schedule,
//! or anything about other players. Diagnostics flow out through
//! [`PolicyEvent`]s that the policy chooses to report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ace::{AceConfig, AceState, ObserveReport, Phase};
use crate::baselines::UcbState;
use crate::error::{ConfigError, PolicyError};
use crate::model::ArmId;
use crate::rng::StreamRng;
use crate::stats::ArmStats;

/// Arms a policy commits to for its next one or two steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    Single(ArmId),
    Pair(ArmId, ArmId),
}

#[allow(clippy::len_without_is_empty)]
impl Selection {
    pub fn len(&self) -> usize {
        match self {
            Selection::Single(_) => 1,
            Selection::Pair(..) => 2,
        }
    }

    pub fn arm(&self, index: usize) -> ArmId {
        match (self, index) {
            (Selection::Single(k), 0) | (Selection::Pair(k, _), 0) | (Selection::Pair(_, k), 1) => {
                *k
            }
            _ => panic!("selection index {index} out of range"),
        }
    }
}

/// Feedback for one pull. `index` is the position inside the current selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feedback {
    pub index: usize,
    pub arm: ArmId,
    pub collided: bool,
    pub reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyEvent {
    EnteredExploitation(ArmId),
    LeftExploitation(ArmId),
    OccupiedAdded(ArmId),
    OccupiedRemoved(ArmId),
    Correction(bool),
}

fn push_report(report: ObserveReport, events: &mut Vec<PolicyEvent>) {
    events.extend(report.added.into_iter().map(PolicyEvent::OccupiedAdded));
    events.extend(report.removed.into_iter().map(PolicyEvent::OccupiedRemoved));
    events.extend(report.correction.map(PolicyEvent::Correction));
    events.extend(report.left_exploitation.map(PolicyEvent::LeftExploitation));
    events.extend(
        report
            .entered_exploitation
            .map(PolicyEvent::EnteredExploitation),
    );
}

pub trait Policy: Send {
    /// Called once when the player becomes active.
    fn on_join(&mut self, _events: &mut Vec<PolicyEvent>) {}

    fn select(&mut self, rng: &mut StreamRng) -> Result<Selection, PolicyError>;

    fn feedback(&mut self, fb: Feedback, events: &mut Vec<PolicyEvent>) -> Result<(), PolicyError>;

    /// The player's window closed part-way through a selection.
    fn truncate(&mut self, _events: &mut Vec<PolicyEvent>) -> Result<(), PolicyError> {
        Ok(())
    }

    /// Per-arm estimates, arm 1 first. Read only by diagnostics.
    fn estimates(&self) -> Option<&[ArmStats]> {
        None
    }

    /// Whether the policy runs in exploration/exploitation phases.
    fn has_phases(&self) -> bool {
        false
    }
}

/// [`AceState`] driven through the policy contract.
#[derive(Debug, Clone)]
pub struct AcePolicy {
    state: AceState,
    first: Option<(ArmId, bool, f64)>,
}

impl AcePolicy {
    pub fn new(cfg: AceConfig) -> Result<Self, ConfigError> {
        Ok(Self {
            state: AceState::new(cfg)?,
            first: None,
        })
    }

    pub fn state(&self) -> &AceState {
        &self.state
    }
}

impl Policy for AcePolicy {
    fn select(&mut self, rng: &mut StreamRng) -> Result<Selection, PolicyError> {
        let (k1, k2) = self.state.double_selection(rng)?;
        self.first = None;
        Ok(Selection::Pair(k1, k2))
    }

    fn feedback(&mut self, fb: Feedback, events: &mut Vec<PolicyEvent>) -> Result<(), PolicyError> {
        match fb.index {
            0 => {
                self.first = Some((fb.arm, fb.collided, fb.reward));
                Ok(())
            }
            _ => {
                let (k1, c1, r1) = self.first.take().ok_or(PolicyError::NoPendingSelection)?;
                let report = self
                    .state
                    .observe_pair(k1, c1, r1, fb.arm, fb.collided, fb.reward)?;
                debug_assert!(self.state.check_invariants().is_ok());
                push_report(report, events);
                Ok(())
            }
        }
    }

    fn truncate(&mut self, events: &mut Vec<PolicyEvent>) -> Result<(), PolicyError> {
        if let Some((k1, c1, r1)) = self.first.take() {
            push_report(self.state.observe_single(k1, c1, r1)?, events);
        }
        Ok(())
    }

    fn estimates(&self) -> Option<&[ArmStats]> {
        Some(self.state.all_stats())
    }

    fn has_phases(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct UcbPolicy {
    state: UcbState,
}

impl UcbPolicy {
    pub fn new(state: UcbState) -> Self {
        Self { state }
    }

    pub fn state(&self) -> &UcbState {
        &self.state
    }
}

impl Policy for UcbPolicy {
    fn select(&mut self, rng: &mut StreamRng) -> Result<Selection, PolicyError> {
        Ok(Selection::Single(self.state.select(rng)))
    }

    fn feedback(
        &mut self,
        fb: Feedback,
        _events: &mut Vec<PolicyEvent>,
    ) -> Result<(), PolicyError> {
        self.state.feedback(fb.arm, fb.collided, fb.reward);
        Ok(())
    }

    fn estimates(&self) -> Option<&[ArmStats]> {
        Some(self.state.stats())
    }
}

/// Scripted player that exploits one arm for its whole window.
#[derive(Debug, Clone, Copy)]
pub struct FixedArmPolicy {
    arm: ArmId,
}

impl FixedArmPolicy {
    pub fn new(arm: ArmId) -> Self {
        Self { arm }
    }
}

impl Policy for FixedArmPolicy {
    fn on_join(&mut self, events: &mut Vec<PolicyEvent>) {
        events.push(PolicyEvent::EnteredExploitation(self.arm));
    }

    fn select(&mut self, _rng: &mut StreamRng) -> Result<Selection, PolicyError> {
        Ok(Selection::Single(self.arm))
    }

    fn feedback(
        &mut self,
        _fb: Feedback,
        _events: &mut Vec<PolicyEvent>,
    ) -> Result<(), PolicyError> {
        Ok(())
    }

    fn has_phases(&self) -> bool {
        true
    }
}

/// Which decision rule a player runs.
///
/// Textual form: `ace`, `ucb(2.0)`, `rd-ucb(2.0)`, `fixed(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Ace,
    Ucb { c: f64 },
    RdUcb { c: f64 },
    Fixed { arm: ArmId },
}

impl Algorithm {
    pub const DEFAULT_C: f64 = 2.0;

    /// Filesystem-friendly name.
    pub fn slug(&self) -> String {
        match self {
            Algorithm::Ace => "ace".into(),
            Algorithm::Ucb { c } => format!("ucb-{c:?}"),
            Algorithm::RdUcb { c } => format!("rd-ucb-{c:?}"),
            Algorithm::Fixed { arm } => format!("fixed-{arm}"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algorithm::Ace => "ace".to_string(),
            Algorithm::Ucb { c } => format!("ucb({c:?})"),
            Algorithm::RdUcb { c } => format!("rd-ucb({c:?})"),
            Algorithm::Fixed { arm } => format!("fixed({arm})"),
        };
        f.pad(&s)
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || ConfigError::UnknownAlgorithm(s.clone());
        let arg = |prefix: &str| -> Option<Option<String>> {
            let rest = s.strip_prefix(prefix)?;
            if rest.is_empty() {
                return Some(None);
            }
            let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
            Some(Some(inner.trim().to_string()))
        };
        let parse_c = |v: Option<String>| -> Result<f64, ConfigError> {
            match v {
                None => Ok(Self::DEFAULT_C),
                Some(v) => match v.parse::<f64>() {
                    Ok(c) if c > 0.0 && c.is_finite() => Ok(c),
                    _ => Err(ConfigError::Parameter(format!(
                        "UCB constant `{v}` must be > 0"
                    ))),
                },
            }
        };
        if s == "ace" {
            Ok(Algorithm::Ace)
        } else if let Some(v) = arg("rd-ucb") {
            Ok(Algorithm::RdUcb { c: parse_c(v)? })
        } else if let Some(v) = arg("ucb") {
            Ok(Algorithm::Ucb { c: parse_c(v)? })
        } else if let Some(Some(v)) = arg("fixed") {
            let arm = v.parse().map_err(|_| unknown())?;
            Ok(Algorithm::Fixed { arm })
        } else {
            Err(unknown())
        }
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Phase of a player as seen through its own reports.
pub(crate) fn phase_after(event: &PolicyEvent) -> Option<(Phase, Option<ArmId>)> {
    match *event {
        PolicyEvent::EnteredExploitation(k) => Some((Phase::Exploitation, Some(k))),
        PolicyEvent::LeftExploitation(_) => Some((Phase::Exploration, None)),
        _ => None,
    }
}
