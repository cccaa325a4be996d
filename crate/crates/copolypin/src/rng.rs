//! Deterministic stream derivation: every consumer of randomness owns a
//! ChaCha stream addressed by `(seed, stream)`, so replica-level parallelism
//! cannot perturb results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A generator for the given `(seed, stream)` address. Draw order within a
/// stream is fixed by the caller; distinct streams are independent.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
