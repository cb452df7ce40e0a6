//! Seedable random source for state sampling.
//!
//! The generator is ChaCha8. A batch run with base seed `s` gives task `k`
//! the stream `k` of the generator seeded with `s`, so results do not depend
//! on how tasks are scheduled across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::herm::C64;

#[derive(Clone, Debug)]
pub struct StateRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl StateRng {
    /// Stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self::for_task(seed, 0)
    }

    /// Independent stream for task `task` of a batch seeded with `seed`.
    pub fn for_task(seed: u64, task: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(task);
        Self { inner, spare: None }
    }

    /// Uniform on (0, 1], 53 bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let phi = std::f64::consts::TAU * self.uniform();
        self.spare = Some(r * phi.sin());
        r * phi.cos()
    }

    /// Complex Gaussian with independent standard normal parts.
    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.gaussian();
        C64::new(re, self.gaussian())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}
