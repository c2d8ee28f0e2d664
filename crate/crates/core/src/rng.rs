//! Seeded randomness shared by retrieval, data splitting and the synthetic
//! generator. Every consumer derives its stream from a `u64` seed so results
//! are reproducible across runs and platforms.

pub use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
