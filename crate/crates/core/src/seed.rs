//! Deterministic seed derivation.
//!
//! Every replication gets its own generator seeded from the master seed and
//! a path of stream identifiers, so replications can run in any order (or in
//! parallel) and still reproduce the same draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type Rng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of stream identifiers.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &id| splitmix64(acc ^ splitmix64(id)))
}

/// Generator for the stream at `path` under `master`.
pub fn rng_for(master: u64, path: &[u64]) -> Rng {
    Rng::seed_from_u64(derive(master, path))
}
