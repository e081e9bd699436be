//! Decentralized, asynchronous multi-player bandits.
//!
//! Players arrive and leave on their own schedule and never communicate. When
//! several pull the same arm in one step they all collide and receive nothing.
//! The crate provides the ACE policy, selfish UCB baselines, a deterministic
//! global-clock simulator, and a harness for batched experiments.

pub mod ace;
pub mod baselines;
pub mod cli;
pub mod engine;
pub mod error;
pub mod harness;
pub mod model;
pub mod policy;
pub mod rng;
pub mod stats;

pub use error::{ConfigError, Error, PolicyError, Result};
