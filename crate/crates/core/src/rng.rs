//! Seeded random substreams.
//!
//! Every random draw in the crate comes from a [`Substream`] keyed by
//! `(seed, family, index)`. The generator is ChaCha20 with a 64-bit stream
//! selector: the key is expanded from `seed` by `rand_core`'s
//! `seed_from_u64`, and the stream selector is `family << 48 | index`.
//! Streams for different keys are independent, and the bytes produced for a
//! key do not depend on platform or thread scheduling.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Recorded in dataset manifests.
pub const RNG_ALGORITHM: &str =
    "chacha20; key = rand_core 0.6 seed_from_u64(seed); stream = family << 48 | index; \
unit = (next_u64 >> 11) * 2^-53";

/// Stream families; each consumer draws from its own family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Family {
    Scenario = 1,
    Genetic = 2,
    Mixing = 3,
    Corpus = 4,
}

pub struct Substream(ChaCha20Rng);

impl Substream {
    pub fn new(seed: u64, family: Family, index: u64) -> Self {
        assert!(index < 1 << 48, "substream index out of range");
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(((family as u64) << 48) | index);
        Substream(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi]`; exactly `lo` when `lo == hi`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `0..n` by rejection sampling.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyed_streams_repeat_and_differ() {
        let draw = |s, f, i| {
            let mut r = Substream::new(s, f, i);
            (0..4).map(|_| r.next_u64()).collect::<Vec<_>>()
        };
        assert_eq!(draw(7, Family::Scenario, 3), draw(7, Family::Scenario, 3));
        assert_ne!(draw(7, Family::Scenario, 3), draw(7, Family::Scenario, 4));
        assert_ne!(draw(7, Family::Scenario, 3), draw(7, Family::Genetic, 3));
        assert_ne!(draw(7, Family::Scenario, 3), draw(8, Family::Scenario, 3));
    }

    #[test]
    fn frozen_first_draw() {
        // Pins the stream derivation; changing it invalidates every golden dataset.
        let mut r = Substream::new(42, Family::Scenario, 0);
        assert_eq!(r.next_u64(), 0x2e2296f52d3c3e10);
    }

    #[test]
    fn degenerate_uniform() {
        let mut r = Substream::new(1, Family::Scenario, 0);
        assert!((0..100).all(|_| r.uniform(1.0, 1.0) == 1.0));
    }

    #[test]
    fn below_covers_range() {
        let mut r = Substream::new(1, Family::Mixing, 0);
        let mut seen = [false; 5];
        for _ in 0..200 {
            seen[r.below(5)] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
