//! Deterministic random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator, which is
//! counter based: the 64-bit master seed selects the key and a 64-bit stream
//! id selects an independent keystream. Stream ids are built as
//! `(purpose << 48) | index`, so e.g. trial 17 of a subspace check draws from
//! `(Purpose::Subsets << 48) | 17` and can never overlap the projection
//! matrix stream, regardless of how many values either consumes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. The discriminant is the high 16 bits of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    ProjectionMatrix = 1,
    Subsets = 2,
    Vectors = 3,
    Seeding = 4,
    Instances = 5,
    Restarts = 6,
}

/// Returns the generator for `(seed, purpose, index)`.
pub fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    debug_assert!(index < (1 << 48));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 48) | index);
    rng
}
