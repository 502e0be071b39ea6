//! Counter-based, splittable random number streams.
//!
//! Every sampler in this crate derives its randomness from `(seed, stream)`
//! pairs so that ensembles are reproducible under any parallel schedule:
//! stream ids are assigned by role (or by attempt index in rejection loops),
//! never by execution order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A family of independent RNG streams under one seed.
#[derive(Debug, Clone, Copy)]
pub struct Streams {
    seed: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// The `id`-th stream. Streams with distinct ids are independent.
    pub fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }

    /// A sub-family, for nesting (e.g. one family per rejection attempt).
    pub fn substreams(&self, id: u64) -> Streams {
        let mut rng = self.stream(id);
        use rand_chacha::rand_core::RngCore;
        Streams { seed: rng.next_u64() }
    }
}
