//! Seeded integer sampling.
//!
//! The generator is xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). A coordinate is
//! `(next_u64() % (2r + 1)) as i64 - r`; Gaussian integers take two
//! draws, real part first.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::poly::{MultilinearPoly, PolyError};
use crate::ring::Scalar;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: Xoshiro256StarStar,
    range: u32,
}

impl Sampler {
    pub fn new(seed: u64, range: u32) -> Self {
        Sampler {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            range,
        }
    }

    pub fn range(&self) -> u32 {
        self.range
    }

    /// Uniform-ish integer in `[-range, range]` (modulo reduction).
    pub fn draw_i64(&mut self) -> i64 {
        let width = 2 * u64::from(self.range) + 1;
        (self.rng.next_u64() % width) as i64 - i64::from(self.range)
    }

    pub fn draw<R: Scalar>(&mut self) -> R {
        R::from_draws(&mut || self.draw_i64())
    }

    pub fn point<R: Scalar>(&mut self, len: usize) -> Vec<R> {
        (0..len).map(|_| self.draw()).collect()
    }

    /// Coefficient table drawn in subset order.
    pub fn multilinear<R: Scalar>(&mut self, n: usize) -> Result<MultilinearPoly<R>, PolyError> {
        if n > crate::poly::MAX_VARS {
            return Err(PolyError::ArityTooLarge(n));
        }
        let table: Vec<R> = (0..1usize << n).map(|_| self.draw()).collect();
        MultilinearPoly::from_table(n, &table)
    }
}
