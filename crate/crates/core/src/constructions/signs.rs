use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Independent Rademacher signs `ε_{x,a}^k`, `x, a, k ∈ 0..n`.
///
/// Generated by `ChaCha8Rng::seed_from_u64(seed)`, one fair bit per entry in
/// `(x, a, k)` row-major order, true ↦ `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignTensor {
    pub n: usize,
    pub seed: u64,
    /// Row-major over `(x, a, k)`.
    pub entries: Vec<i8>,
}

impl SignTensor {
    pub fn new(n: usize, seed: u64, entries: Vec<i8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("sign tensor needs n >= 1"));
        }
        if entries.len() != n * n * n {
            return Err(Error::dim(format!("sign tensor of size {n} needs {} entries", n * n * n)));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::invalid("sign tensor entries must be ±1"));
        }
        Ok(Self { n, seed, entries })
    }

    pub fn get(&self, x: usize, a: usize, k: usize) -> f64 {
        f64::from(self.entries[(x * self.n + a) * self.n + k])
    }

    /// `(ε_{x,a}^1, …, ε_{x,a}^n)`.
    pub fn vector(&self, x: usize, a: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.get(x, a, k))
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&e| f64::from(e)).sum::<f64>() / self.entries.len() as f64
    }

    /// `|mean| ≤ 4/√(n³)`, i.e. within four standard deviations of zero.
    pub fn mean_is_typical(&self) -> bool {
        self.mean().abs() <= 4.0 / (self.entries.len() as f64).sqrt()
    }
}

pub fn bernoulli_signs(n: usize, seed: u64) -> Result<SignTensor> {
    if n == 0 {
        return Err(Error::param("sign tensor needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n * n * n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    Ok(SignTensor { n, seed, entries })
}
