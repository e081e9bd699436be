//! A scripted player exploits arm 1 until t = 500,000 while an ACE player
//! watches. Prints when the observer marks the arm occupied and when it
//! notices the release.
//!
//!     cargo run --release --example detection_latency

use mpmab::engine::{run, RunConfig, RunOptions};
use mpmab::model::{BanditEnv, Schedule};
use mpmab::policy::Algorithm;

fn main() -> mpmab::Result<()> {
    let horizon = 1_000_000;
    let env = BanditEnv::gaussian_ladder(10, 0.1, 0.05, 0.5)?;
    let sched = Schedule::from_pairs(&[(1, 500_000), (1, horizon)], horizon);
    for seed in 0..4 {
        let cfg = RunConfig {
            env: env.clone(),
            schedule: sched.clone(),
            policies: vec![Algorithm::Fixed { arm: 1 }, Algorithm::Ace],
            m: 3,
            epsilon_mode: Default::default(),
            epsilon: Some(0.1),
            master_seed: seed,
            options: RunOptions::default(),
        };
        let trace = run(&cfg)?;
        for d in trace.detections.iter().filter(|d| d.player == 2) {
            let latency = d.latency.map_or("false detection".to_string(), |l| {
                format!("after {l} steps")
            });
            println!(
                "seed {seed}: t = {:>7} arm {} {} ({latency})",
                d.t,
                d.arm,
                d.kind.as_str()
            );
        }
    }
    Ok(())
}
