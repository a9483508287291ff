use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::state::PureState;

/// Seeded random stream. Identical seeds reproduce identical draw sequences
/// across runs and platforms (ChaCha12 keystream, no OS entropy).
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child stream for independently seeded work items. Streams derived with
    /// distinct indices are statistically independent, so parallel or
    /// reordered consumers produce the same draws as a sequential run.
    pub fn derive(&self, index: u64) -> Self {
        Self::from_seed(splitmix64(self.seed ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15))))
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        // 1 - u maps [0,1) onto (0,1], keeping the log finite.
        let u = 1.0 - self.uniform();
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    /// Sample an index with the given probability weights. Zero-weight
    /// outcomes are never selected.
    pub fn sample_discrete(&mut self, probabilities: &[f64]) -> Result<usize> {
        let total: f64 = probabilities.iter().sum();
        if total <= 0.0 {
            return Err(Error::NoOutcomeMass);
        }
        let r = self.uniform() * total;
        let mut cumulative = 0.0;
        let mut last_positive = None;
        for (i, &p) in probabilities.iter().enumerate() {
            if p > 0.0 {
                cumulative += p;
                last_positive = Some(i);
                if r < cumulative {
                    return Ok(i);
                }
            }
        }
        // Rounding can leave r marginally above the accumulated total.
        last_positive.ok_or(Error::NoOutcomeMass)
    }

    /// Haar-random pure state: normalize a vector of standard complex
    /// Gaussians.
    pub fn haar_state(&mut self, num_qubits: usize) -> Result<PureState> {
        let dim = 1usize << num_qubits;
        let mut amplitudes = Vec::with_capacity(dim);
        loop {
            amplitudes.clear();
            for _ in 0..dim {
                amplitudes.push(Complex64::new(self.normal(), self.normal()));
            }
            let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for a in &mut amplitudes {
                    *a /= norm;
                }
                return PureState::new(amplitudes);
            }
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
