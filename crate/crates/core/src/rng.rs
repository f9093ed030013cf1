//! Seeded, reproducible random streams.
//!
//! A master seed selects a ChaCha8 key; sample `i` of a batch reads ChaCha
//! stream `i` under that key. Substreams are therefore independent and a
//! given `(seed, index)` pair always yields the same output, no matter how
//! many threads a batch runs on.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngHandle {
    inner: ChaCha8Rng,
}

impl RngHandle {
    /// Stream 0 of the key derived from `seed`.
    pub fn new(seed: u64) -> Self {
        RngHandle {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream `index` of `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        RngHandle { inner }
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
