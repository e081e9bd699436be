//! Horizon-dependent constants: queue windows, their thresholds, and the
//! probing probability `epsilon`.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Whether players know the bound `m` on simultaneously active players, or
/// fall back to `floor(K/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    #[default]
    KnownM,
    UnknownM,
}

/// Window lengths of the collision queues and their firing thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueLengths {
    /// Window of the occupancy (two-collision) queue.
    pub lp: usize,
    /// Window of the release (non-collision) queue.
    pub lq: usize,
    /// `ceil(0.85 * lp)`.
    pub thr_p: usize,
    /// `ceil(0.142 * lq)`.
    pub thr_q: usize,
}

fn check_horizon(horizon: u64) -> Result<(), ConfigError> {
    if horizon < 3 {
        return Err(ConfigError::Parameter(format!(
            "horizon must be at least 3, got {horizon}"
        )));
    }
    Ok(())
}

/// `L_p = ceil(866 ln T)`, `L_q = ceil(570 ln T)`.
pub fn queue_lengths(horizon: u64) -> Result<QueueLengths, ConfigError> {
    check_horizon(horizon)?;
    let ln_t = (horizon as f64).ln();
    let lp = (866.0 * ln_t).ceil() as usize;
    let lq = (570.0 * ln_t).ceil() as usize;
    // Integer ceilings: 0.85 and 0.142 are inexact in binary, and a product
    // landing on an integer must not round up.
    let thr_p = (85 * lp).div_ceil(100);
    let thr_q = (142 * lq).div_ceil(1000);
    Ok(QueueLengths {
        lp,
        lq,
        thr_p,
        thr_q,
    })
}

/// Probing probability.
///
/// Known `m`: `min{ sqrt(1141 m^3 ln T / 2T), 1/K, 1/10 }`.
/// Unknown `m`: `min{ sqrt(1141 K^3 ln T / 16T), 1/K, 1/10 }`.
pub fn compute_epsilon(
    m: usize,
    num_arms: usize,
    horizon: u64,
    mode: EpsilonMode,
) -> Result<f64, ConfigError> {
    check_horizon(horizon)?;
    if num_arms < 2 {
        return Err(ConfigError::Parameter(format!(
            "need at least 2 arms, got {num_arms}"
        )));
    }
    if m == 0 || m > num_arms / 2 {
        return Err(ConfigError::Parameter(format!(
            "m = {m} must lie in 1..=floor(K/2) = {}",
            num_arms / 2
        )));
    }
    let t = horizon as f64;
    let ln_t = t.ln();
    let root = match mode {
        EpsilonMode::KnownM => (1141.0 * (m as f64).powi(3) * ln_t / (2.0 * t)).sqrt(),
        EpsilonMode::UnknownM => (1141.0 * (num_arms as f64).powi(3) * ln_t / (16.0 * t)).sqrt(),
    };
    Ok(root.min(1.0 / num_arms as f64).min(0.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queue_lengths_at_three() {
        let q = queue_lengths(3).unwrap();
        assert_eq!(q.lp, 952);
        assert_eq!(q.lq, 627);
    }

    #[test]
    fn integer_thresholds_do_not_overshoot() {
        // 0.85 * 20 = 17 exactly; the float product is 17.000000000000004.
        assert_eq!((85usize * 20).div_ceil(100), 17);
        assert_eq!((142usize * 1000).div_ceil(1000), 142);
    }

    #[test]
    fn epsilon_clamps_at_a_tenth_for_few_arms() {
        for k in [2, 4, 6, 8, 10] {
            let eps = compute_epsilon(1, k, 3, EpsilonMode::KnownM).unwrap();
            assert_eq!(eps, 0.1);
        }
    }

    #[test]
    fn epsilon_rejects_bad_inputs() {
        assert!(compute_epsilon(0, 10, 100, EpsilonMode::KnownM).is_err());
        assert!(compute_epsilon(6, 10, 100, EpsilonMode::KnownM).is_err());
        assert!(compute_epsilon(1, 1, 100, EpsilonMode::KnownM).is_err());
        assert!(compute_epsilon(1, 4, 2, EpsilonMode::KnownM).is_err());
        assert!(queue_lengths(0).is_err());
    }

    #[test]
    fn epsilon_uses_the_root_term_on_long_horizons() {
        let t = 10u64.pow(12);
        let eps = compute_epsilon(2, 10, t, EpsilonMode::KnownM).unwrap();
        let expected = (1141.0 * 8.0 * (t as f64).ln() / (2.0 * t as f64)).sqrt();
        assert!((eps - expected).abs() < 1e-15);
        assert!(eps < 0.1);
    }
}
