//! Seed derivation.
//!
//! Every random draw in an experiment is driven by a ChaCha8 stream seeded from
//! a 64-bit value. Sub-seeds are derived with the SplitMix64 finalizer so that
//! the seed for `(classifier, replicate)` depends only on those two indices and
//! the master seed:
//!
//! ```text
//! derive(master, a, b) = mix(mix(master ^ mix(a + C1)) ^ mix(b + C2))
//! ```
//!
//! where `mix` is the SplitMix64 output function and `C1`, `C2` are fixed odd
//! constants. Adding a classifier to a config therefore never changes the
//! resamples drawn for the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const SALT_A: u64 = 0xD1B5_4A32_D192_ED03;
const SALT_B: u64 = 0x8CB9_2BA7_2F3D_8DD7;

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for item `(a, b)` under `master`.
pub fn derive(master: u64, a: u64, b: u64) -> u64 {
    let first = mix(master ^ mix(a.wrapping_add(SALT_A)));
    mix(first ^ mix(b.wrapping_add(SALT_B)))
}

/// Deterministic, platform-independent generator for `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
