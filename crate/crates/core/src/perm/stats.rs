use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformStatistics {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub fraction_indecomposable: f64,
    pub fraction_simple: f64,
}

impl UniformStatistics {
    /// Binomial standard error of a fraction estimated from `samples` draws.
    pub fn standard_error(&self, fraction: f64) -> f64 {
        (fraction * (1.0 - fraction) / self.samples as f64).sqrt()
    }
}

/// Monte Carlo frequencies of indecomposable and simple permutations among
/// uniformly random permutations of order `n` (Fisher–Yates shuffles).
pub fn sample_uniform_statistics(n: usize, samples: usize, seed: u64) -> Result<UniformStatistics> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidArgument("n and samples must be positive".into()));
    }
    let blocks: Vec<_> = rng::blocks(samples).collect();
    let (indec, simple) = blocks
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = rng::block_rng(seed, b);
            let mut values: Vec<usize> = (0..n).collect();
            let (mut i, mut s) = (0u64, 0u64);
            for _ in 0..len {
                values.shuffle(&mut rng);
                let p = Permutation::from_zero_based_unchecked(values.clone());
                i += p.is_indecomposable() as u64;
                s += p.is_simple() as u64;
            }
            (i, s)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(UniformStatistics {
        n,
        samples,
        seed,
        fraction_indecomposable: indec as f64 / samples as f64,
        fraction_simple: simple as f64 / samples as f64,
    })
}
