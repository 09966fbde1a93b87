use num_traits::Signed;
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fbullet::{f_bullet, FBulletParam};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{to_f64, Rational};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub epsilon: f64,
    pub n0: usize,
    pub samples: usize,
    pub seed: u64,
}

impl TesterConfig {
    fn validate(&self, param: &FBulletParam) -> Result<()> {
        if self.epsilon <= 0.0 || !self.epsilon.is_finite() {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if self.n0 < param.max_order() {
            return Err(Error::InvalidArgument(format!(
                "subsample order {} is below the largest pattern order {}",
                self.n0,
                param.max_order()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsampleEstimate {
    /// f• of the full permutation.
    pub target: f64,
    /// Mean of f• over the subsamples.
    pub estimate: f64,
    pub std_error: f64,
    /// Fraction of subsamples whose f• is at least `epsilon` away from the target.
    pub empirical_error_rate: f64,
    pub n0: usize,
    pub samples: usize,
}

/// Estimates f•(σ) by f• of uniformly random induced subpermutations of
/// order `n0`.
pub fn estimate_by_subsampling(param: &FBulletParam, sigma: &Permutation, cfg: &TesterConfig) -> Result<SubsampleEstimate> {
    cfg.validate(param)?;
    let n = sigma.len();
    if n < cfg.n0 {
        return Err(Error::InvalidArgument(format!(
            "permutation of order {n} is shorter than the subsample order {}",
            cfg.n0
        )));
    }
    let target = f_bullet(param, sigma);
    let blocks: Vec<_> = rng::blocks(cfg.samples).collect();
    let values: Vec<Rational> = blocks
        .into_par_iter()
        .flat_map_iter(|(b, len)| {
            let mut rng = rng::block_rng(cfg.seed, b);
            (0..len)
                .map(|_| {
                    let mut pos = index::sample(&mut rng, n, cfg.n0).into_vec();
                    pos.sort_unstable();
                    f_bullet(param, &sigma.pattern_at(&pos))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<Rational>() / Rational::from_integer(values.len().into());
    let mean_f = to_f64(&mean);
    let var = if values.len() > 1 {
        values.iter().map(|v| (to_f64(v) - mean_f).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    let errors = values
        .iter()
        .filter(|v| to_f64(&(*v - &target).abs()) >= cfg.epsilon)
        .count();
    Ok(SubsampleEstimate {
        target: to_f64(&target),
        estimate: mean_f,
        std_error: (var / m).sqrt(),
        empirical_error_rate: errors as f64 / m,
        n0: cfg.n0,
        samples: cfg.samples,
    })
}
