use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Rat;

/// Largest numerator and denominator drawn by [`RatSampler`].
pub const SAMPLE_BOUND: i64 = 10007;

/// Deterministic source of random rationals `p/q` with `p, q` uniform in
/// `[1, SAMPLE_BOUND]`.
#[derive(Debug, Clone)]
pub struct RatSampler {
    rng: ChaCha8Rng,
}

impl RatSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_rat(&mut self) -> Rat {
        let p = self.rng.gen_range(1..=SAMPLE_BOUND);
        let q = self.rng.gen_range(1..=SAMPLE_BOUND);
        Rat::new(p.into(), q.into())
    }

    /// Same as [`next_rat`](Self::next_rat) with a random sign.
    pub fn next_signed(&mut self) -> Rat {
        let r = self.next_rat();
        if self.rng.gen_bool(0.5) {
            -r
        } else {
            r
        }
    }

    pub fn point(&mut self, ids: &[usize]) -> BTreeMap<usize, Rat> {
        ids.iter().map(|&i| (i, self.next_rat())).collect()
    }

    pub fn vector(&mut self, len: usize) -> Vec<Rat> {
        (0..len).map(|_| self.next_signed()).collect()
    }
}
