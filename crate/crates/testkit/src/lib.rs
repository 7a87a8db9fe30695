//! Independent oracles and random generators shared by the test suites.

pub mod auction;
pub mod examples;
pub mod gen;
pub mod logic;
pub mod named;
pub mod scan;
pub mod status;
pub mod tptp_gen;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for reproducible test corpora.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
