mod common;

use common::*;
use mpmab::ace::{compute_epsilon, queue_lengths, AceConfig, AceState, EpsilonMode};
use mpmab::stats::ArmStats;

#[test]
fn queue_lengths_match_the_oracle() {
    let q = queue_lengths(2_000_000).unwrap();
    assert_eq!(
        (q.lp, q.lq, q.thr_p, q.thr_q),
        (LP_2E6, LQ_2E6, THR_P_2E6, THR_Q_2E6)
    );
    for (t, lp, lq) in LENGTHS {
        let q = queue_lengths(t).unwrap();
        assert_eq!((q.lp, q.lq), (lp, lq), "T = {t}");
    }
}

#[test]
fn epsilon_matches_the_oracle() {
    let eps = compute_epsilon(10, 20, 2_000_000, EpsilonMode::KnownM).unwrap();
    assert_eq!(eps, EPS_M10_K20_2E6);
    const { assert!(EPS_ROOT_M10_K20_2E6 > 1.0 / 20.0) };
    let eps = compute_epsilon(2, 10, 1_000_000_000_000, EpsilonMode::KnownM).unwrap();
    assert!((eps - EPS_M2_K10_1E12).abs() <= 1e-15, "{eps}");
    let eps = compute_epsilon(2, 10, 1_000_000_000_000, EpsilonMode::UnknownM).unwrap();
    assert!((eps - EPS_UNKNOWN_K10_1E12).abs() <= 1e-15, "{eps}");
}

#[test]
fn radius_matches_the_oracle() {
    let mut s = ArmStats::default();
    for _ in 0..100 {
        s.record(0.5);
    }
    assert!((s.radius(6.0, (2e6f64).ln()) - RADIUS_N100_2E6).abs() < 1e-15);
    assert!(((2e6f64).ln() - LN_2E6).abs() < 1e-15);
}

#[test]
fn state_uses_the_shared_constants() {
    let st = AceState::new(AceConfig::new(20, 10, 2_000_000)).unwrap();
    assert_eq!(st.lengths().lp, LP_2E6);
    assert_eq!(st.epsilon(), EPS_M10_K20_2E6);
    assert_eq!(st.p_queue(1).capacity(), LP_2E6);
    assert_eq!(st.q_queue(20).capacity(), LQ_2E6);
}
