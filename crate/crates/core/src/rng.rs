//! Counter-based random streams.
//!
//! Every consumer of randomness in a run owns an independent ChaCha8 stream
//! keyed by `(master_seed, stream_id)`. Stream 0 is the environment; stream `j`
//! belongs to player `j`. Adding or removing a player leaves every other
//! stream untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub const ENV_STREAM: u64 = 0;
/// Reserved for harness-side draws such as generated schedules.
pub const HARNESS_STREAM: u64 = u64::MAX;

pub fn stream(master_seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id);
    rng
}
