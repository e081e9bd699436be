//! The synthetic departure table at a tenth of its length: four players leave
//! at t = 10,000 while four more arrive at 8,000. Compares the regret slope
//! over the final quarter.
//!
//!     cargo run --release --example departure_scenario [seeds]

use mpmab::engine::{run, RunConfig};
use mpmab::harness::preset_schedule;
use mpmab::model::BanditEnv;
use mpmab::policy::Algorithm;

fn main() -> mpmab::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);
    let sched = preset_schedule("table2b")?.scaled(0.1);
    let env = BanditEnv::gaussian_ladder(20, 0.1, 0.05, 0.5)?;
    let horizon = sched.horizon();

    for alg in [
        Algorithm::Ace,
        Algorithm::Ucb { c: 2.0 },
        Algorithm::RdUcb { c: 2.0 },
    ] {
        let mut slope = 0.0;
        let mut last = 0.0;
        for seed in 0..seeds {
            let mut cfg = RunConfig::uniform(env.clone(), sched.clone(), alg, seed);
            cfg.m = 10;
            let trace = run(&cfg)?;
            slope += (trace.regret_at(horizon) - trace.regret_at(3 * horizon / 4))
                / (horizon / 4) as f64;
            last += trace.final_regret();
        }
        let n = seeds as f64;
        println!(
            "{alg:>12}: final regret {:>10.1}   final-quarter slope {:.4}",
            last / n,
            slope / n
        );
    }
    Ok(())
}
