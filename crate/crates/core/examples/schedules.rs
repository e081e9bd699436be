//! Built-in tables, generated schedules, and the schedule file format.
//!
//!     cargo run --example schedules

use mpmab::harness::presets::describe;
use mpmab::harness::{
    generate_random_schedule, preset_schedule, read_schedule, write_schedule, PRESET_IDS,
};
use mpmab::rng::{stream, HARNESS_STREAM};

fn main() -> mpmab::Result<()> {
    for id in PRESET_IDS {
        let s = preset_schedule(id)?;
        println!(
            "{id:<8} {:<55} peak {} active",
            describe(id).unwrap_or_default(),
            s.max_active()
        );
    }

    let mut rng = stream(0, HARNESS_STREAM);
    let random = generate_random_schedule(1_000_000, 4, &mut rng)?;
    let mut csv = Vec::new();
    write_schedule(&random, &mut csv).expect("in-memory write");
    print!("\n{}", String::from_utf8_lossy(&csv));

    let back = read_schedule(csv.as_slice(), Some(random.horizon()))?;
    assert_eq!(back, random);
    println!("active at t = 500000: {:?}", back.active_players(500_000));
    Ok(())
}
