//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use mpmab::model::{BanditEnv, PullRecord};

/// `ln(2e6)` and the constants that depend on it, evaluated once at 40-digit
/// precision.
pub const LN_2E6: f64 = 14.508657738524219;
pub const LP_2E6: usize = 12565;
pub const LQ_2E6: usize = 8270;
pub const THR_P_2E6: usize = 10681;
pub const THR_Q_2E6: usize = 1175;
/// `sqrt(1141 * 10^3 * ln(2e6) / 4e6)`, far above the `1/K` cap.
pub const EPS_ROOT_M10_K20_2E6: f64 = 2.0343536123088418;
/// `min{root, 1/20, 1/10}`.
pub const EPS_M10_K20_2E6: f64 = 0.05;
/// `sqrt(1141 * 8 * ln(1e12) / 2e12)`.
pub const EPS_M2_K10_1E12: f64 = 0.00035511685453255791;
/// `sqrt(1141 * 10^3 * ln(1e12) / 16e12)`.
pub const EPS_UNKNOWN_K10_1E12: f64 = 0.0014037226197969649;
/// Queue windows at other horizons.
pub const LENGTHS: [(u64, usize, usize); 3] =
    [(3, 952, 627), (100, 3989, 2625), (200_000, 10571, 6958)];
/// `sqrt(6 ln(2e6) / 100)`.
pub const RADIUS_N100_2E6: f64 = 0.933_016_325_854_726_5;
/// `1926 * 10 * ln(1e6)` and `1141 * 3 * ln(1e6) / 0.1`.
pub const ADD_LATENCY_BOUND: f64 = 266086.73334639192;
pub const REMOVE_LATENCY_BOUND: f64 = 472_904.926_399_117_1;

/// Recomputes cumulative regret from an action log without the engine's
/// helpers: collisions are re-derived by pairwise comparison, and the optimum
/// from a fresh descending sort of the means.
pub fn brute_force_regret(env: &BanditEnv, actions: &[Vec<PullRecord>]) -> Vec<f64> {
    let mut sorted = env.means();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut out = Vec::with_capacity(actions.len());
    for step in actions {
        let arms: Vec<usize> = step.iter().map(|r| r.arm.expect("active")).collect();
        let mut earned = 0.0;
        for (i, &a) in arms.iter().enumerate() {
            let shared = arms.iter().enumerate().any(|(j, &b)| j != i && b == a);
            assert_eq!(shared, step[i].collided, "collision flag disagrees");
            if !shared {
                earned += env.mean(a);
            }
        }
        let best: f64 = sorted.iter().take(arms.len()).sum();
        cum += (best - earned).max(0.0);
        out.push(cum);
    }
    out
}
