//! Random schedules and the `player,start,end` file format.

use std::io::{Read, Write};

use rand::Rng;

use crate::error::ConfigError;
use crate::model::{Interval, Schedule};

/// Draws start uniformly on `[1, T/2]` and end uniformly on `[T/2, T]` for each
/// player, redrawing the pair until `end - start >= T/M`.
///
/// `M = 1` (and any `M` small enough that `T/M` exceeds the widest possible
/// window `T - 1`) is rejected.
pub fn generate_random_schedule<R: Rng + ?Sized>(
    horizon: u64,
    players: usize,
    rng: &mut R,
) -> Result<Schedule, ConfigError> {
    if players == 0 || horizon < players as u64 {
        return Err(ConfigError::Parameter(format!(
            "random schedule needs 1 <= M <= T, got M = {players}, T = {horizon}"
        )));
    }
    let min_span = horizon.div_ceil(players as u64);
    let last_start = horizon / 2;
    let first_end = horizon.div_ceil(2);
    if last_start < 1 || horizon - 1 < min_span {
        return Err(ConfigError::Parameter(format!(
            "no window in [1, {last_start}] x [{first_end}, {horizon}] spans T/M = {min_span} steps"
        )));
    }
    let entries = (0..players)
        .map(|_| loop {
            let start = rng.random_range(1..=last_start);
            let end = rng.random_range(first_end..=horizon);
            if end - start >= min_span {
                break Interval { start, end };
            }
        })
        .collect();
    Ok(Schedule::new(entries, horizon))
}

/// Writes the header `player,start,end` and one row per player.
pub fn write_schedule<W: Write>(sched: &Schedule, mut out: W) -> std::io::Result<()> {
    writeln!(out, "player,start,end")?;
    for (j, iv) in sched.entries().iter().enumerate() {
        writeln!(out, "{},{},{}", j + 1, iv.start, iv.end)?;
    }
    out.flush()
}

/// Parses a schedule file. Rows must list players `1..=M` in order. The file
/// carries no horizon; `horizon` defaults to the latest end.
pub fn read_schedule<R: Read>(input: R, horizon: Option<u64>) -> Result<Schedule, ConfigError> {
    let malformed = |detail: String| ConfigError::Malformed {
        what: "schedule file",
        detail,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| malformed(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["player", "start", "end"] {
        return Err(malformed(format!(
            "expected header `player,start,end`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries = Vec::new();
    for (i, record) in reader.deserialize::<(usize, u64, u64)>().enumerate() {
        let (player, start, end) = record.map_err(|e| malformed(e.to_string()))?;
        if player != i + 1 {
            return Err(malformed(format!(
                "row {} lists player {player}, expected {}",
                i + 1,
                i + 1
            )));
        }
        entries.push(Interval { start, end });
    }
    if entries.is_empty() {
        return Err(malformed("no players".into()));
    }
    let horizon = horizon.unwrap_or_else(|| entries.iter().map(|iv| iv.end).max().unwrap_or(1));
    Ok(Schedule::new(entries, horizon))
}
