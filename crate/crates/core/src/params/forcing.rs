use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::fbullet::{f_bullet, FBulletParam};
use crate::error::{Error, Result};
use crate::perm::{density, permutations_of_order, Permutation};
use crate::permuton::PointSampler;
use crate::rational::{format_rational, to_f64, Rational};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderGaps {
    pub n: usize,
    /// Mean over repetitions of the largest low-order density gap.
    pub mean_low_order_gap: f64,
    pub max_low_order_gap: f64,
    pub mean_abs_fbullet_gap: f64,
    pub mean_signed_fbullet_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcingReport {
    pub k: usize,
    pub tau_k: Permutation,
    pub low_order: usize,
    pub alpha_k: String,
    pub gamma_k: String,
    pub alpha_gamma: f64,
    /// `α_k γ_k / 4`.
    pub threshold: f64,
    pub matching_error: f64,
    pub seed: u64,
    pub repetitions: usize,
    pub orders: Vec<OrderGaps>,
    pub low_order_gap_decreasing: bool,
    pub separation_at_largest_order: bool,
    pub separation_observed: bool,
    pub summary: String,
}

fn low_order_patterns(m: usize) -> Vec<Permutation> {
    (2..=m).flat_map(permutations_of_order).collect()
}

/// Samples pairs of a `Φ_k`-random and a `Φ'_k`-random permutation of each
/// order, and compares their low-order density gap with their f• gap.
pub fn forcing_failure_experiment(
    param: &FBulletParam,
    k: usize,
    orders: &[usize],
    seed: u64,
    repetitions: usize,
) -> Result<ForcingReport> {
    if k == 0 || k > param.len() {
        return Err(Error::InvalidArgument(format!(
            "index {k} is outside 1..={}",
            param.len()
        )));
    }
    let witness = param.gammas()[k - 1]
        .as_ref()
        .ok_or_else(|| Error::contract(format!("index {k} has no separation witness")))?;
    if !witness.gamma.is_positive() {
        return Err(Error::contract(format!("separation at index {k} is not positive")));
    }
    if orders.is_empty() || repetitions == 0 {
        return Err(Error::InvalidArgument("need at least one order and one repetition".into()));
    }
    let tau_k = param.taus()[k - 1].clone();
    if let Some(&n) = orders.iter().find(|&&n| n < tau_k.len()) {
        return Err(Error::InvalidArgument(format!(
            "order {n} is below the pattern order {}",
            tau_k.len()
        )));
    }
    let low = low_order_patterns(witness.low_order);
    let sampler = PointSampler::new(&witness.phi);
    let sampler_prime = PointSampler::new(&witness.phi_prime);
    let alpha_gamma = &param.alphas()[k - 1] * &witness.gamma;
    let threshold = to_f64(&(&alpha_gamma / Rational::from_integer(4.into())));

    let mut rows = Vec::with_capacity(orders.len());
    for (oi, &n) in orders.iter().enumerate() {
        let samples: Vec<(f64, f64)> = (0..repetitions)
            .into_par_iter()
            .map(|r| {
                let mut rng = rng::block_rng(seed, (oi * repetitions + r) as u64);
                let sigma = sampler.permutation(n, &mut rng);
                let sigma_prime = sampler_prime.permutation(n, &mut rng);
                let gap = low
                    .iter()
                    .map(|rho| (density(rho, &sigma) - density(rho, &sigma_prime)).abs())
                    .fold(Rational::zero(), |a, b| if b > a { b } else { a });
                let fgap = f_bullet(param, &sigma) - f_bullet(param, &sigma_prime);
                (to_f64(&gap), to_f64(&fgap))
            })
            .collect();
        let reps = repetitions as f64;
        rows.push(OrderGaps {
            n,
            mean_low_order_gap: samples.iter().map(|s| s.0).sum::<f64>() / reps,
            max_low_order_gap: samples.iter().map(|s| s.0).fold(0.0, f64::max),
            mean_abs_fbullet_gap: samples.iter().map(|s| s.1.abs()).sum::<f64>() / reps,
            mean_signed_fbullet_gap: samples.iter().map(|s| s.1).sum::<f64>() / reps,
        });
    }
    let low_order_gap_decreasing = rows.windows(2).all(|w| w[1].mean_low_order_gap < w[0].mean_low_order_gap);
    let last = rows.last().expect("at least one order");
    let separation_at_largest_order = last.mean_abs_fbullet_gap > threshold;
    let separation_observed = low_order_gap_decreasing && separation_at_largest_order;
    let summary = if separation_observed {
        format!(
            "low-order gaps shrink while the f-bullet gap {:.3e} at order {} exceeds alpha*gamma/4 = {:.3e}",
            last.mean_abs_fbullet_gap, last.n, threshold
        )
    } else if !low_order_gap_decreasing {
        "separation not yet visible at these orders: low-order gaps are not decreasing".to_string()
    } else {
        format!(
            "separation not yet visible at these orders: f-bullet gap {:.3e} is below {:.3e}",
            last.mean_abs_fbullet_gap, threshold
        )
    };
    Ok(ForcingReport {
        k,
        tau_k,
        low_order: witness.low_order,
        alpha_k: format_rational(&param.alphas()[k - 1]),
        gamma_k: format_rational(&witness.gamma),
        alpha_gamma: to_f64(&alpha_gamma),
        threshold,
        matching_error: witness.matching_error,
        seed,
        repetitions,
        orders: rows,
        low_order_gap_decreasing,
        separation_at_largest_order,
        separation_observed,
        summary,
    })
}
