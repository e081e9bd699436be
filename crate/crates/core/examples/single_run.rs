//! One run per algorithm on a small environment with staggered players.
//!
//!     cargo run --release --example single_run

use mpmab::engine::{run, RunConfig};
use mpmab::model::{ArmDist, BanditEnv, Schedule};
use mpmab::policy::Algorithm;

fn main() -> mpmab::Result<()> {
    let env = BanditEnv::from_means(
        &[0.9, 0.7, 0.4, 0.3, 0.2, 0.1],
        ArmDist::Gaussian { sigma: 0.3 },
    )?;
    let horizon = 300_000;
    let sched = Schedule::from_pairs(
        &[(1, horizon), (5_000, horizon), (20_000, 150_000)],
        horizon,
    );

    for alg in [
        Algorithm::Ace,
        Algorithm::Ucb { c: 2.0 },
        Algorithm::RdUcb { c: 2.0 },
    ] {
        let trace = run(&RunConfig::uniform(env.clone(), sched.clone(), alg, 7))?;
        let collisions: u64 = trace.collisions.iter().map(|&c| c as u64).sum();
        println!(
            "{alg:>12}: regret {:>10.1}   collisions {collisions}",
            trace.final_regret()
        );
        for p in &trace.phases {
            if let Some(k) = p.exploit_arm {
                println!(
                    "{:>14}player {} exploits arm {k} from t = {}",
                    "", p.player, p.t
                );
            }
        }
    }
    Ok(())
}
