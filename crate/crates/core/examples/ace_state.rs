//! Driving one ACE player by hand, without the simulator: the caller plays
//! the environment and reports each cycle's two pulls.
//!
//!     cargo run --release --example ace_state

use mpmab::ace::{AceConfig, AceState, Phase};
use mpmab::rng::stream;
use rand::Rng;

fn main() -> mpmab::Result<()> {
    let means = [0.9, 0.6, 0.3, 0.1];
    // Arm 1 is held by someone else: every pull of it collides.
    let held = 1;
    let mut player = AceState::new(AceConfig::new(means.len(), 2, 200_000))?;
    let mut rng = stream(3, 1);
    let mut env = stream(3, 0);
    let mut pull = |k: usize| -> (bool, f64) {
        if k == held {
            (true, 0.0)
        } else {
            (false, means[k - 1] + 0.2 * (env.random::<f64>() - 0.5))
        }
    };

    for cycle in 0..100_000 {
        let (k1, k2) = player
            .double_selection(&mut rng)
            .map_err(|source| mpmab::Error::Policy { player: 1, source })?;
        let (c1, r1) = pull(k1);
        let (c2, r2) = pull(k2);
        let report = player
            .observe_pair(k1, c1, r1, k2, c2, r2)
            .map_err(|source| mpmab::Error::Policy { player: 1, source })?;
        if !report.is_empty() {
            println!("cycle {cycle:>6}: {report:?}");
        }
        if player.phase() == Phase::Exploitation {
            break;
        }
    }
    println!(
        "occupied {:?}, exploiting {:?}",
        player.occupied(),
        player.exploit_arm()
    );
    Ok(())
}
