use std::path::PathBuf;

use thiserror::Error;

use crate::model::{ArmId, PlayerId, ValidationReport};

/// Invalid input: a bad parameter, an unusable config, or a broken assumption.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid arm: {0}")]
    InvalidArm(String),
    #[error("need at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("player {player} chose arm {arm}, valid arms are 1..={num_arms}")]
    ArmOutOfRange {
        player: PlayerId,
        arm: ArmId,
        num_arms: usize,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("configuration violates the model assumptions:\n{0}")]
    Validation(ValidationReport),
    #[error("unknown schedule preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown algorithm `{0}` (expected ace, ucb(c) or rd-ucb(c))")]
    UnknownAlgorithm(String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
}

/// A policy was driven in a way that breaks its protocol.
#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("feedback for arm {got} but arm {expected} was selected")]
    FeedbackMismatch { expected: ArmId, got: ArmId },
    #[error("feedback received with no pending selection")]
    NoPendingSelection,
    #[error("correction mode with an empty occupied set")]
    EmptyCorrection,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("player {player}: {source}")]
    Policy {
        player: PlayerId,
        #[source]
        source: PolicyError,
    },
    #[error("players {first} and {second} both exploit arm {arm} at step {t}")]
    ExploitationConflict {
        t: u64,
        arm: ArmId,
        first: PlayerId,
        second: PlayerId,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} already exists (pass --force to overwrite)")]
    WouldOverwrite(PathBuf),
    #[error("nothing to plot")]
    EmptyResult,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for validation/usage problems, 2 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::WouldOverwrite(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
