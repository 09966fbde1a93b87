use num_traits::{Signed, Zero};

use super::fbullet::{FBulletParam, GammaWitness};
use crate::error::{Error, Result};
use crate::perm::{enumerate_patterns_capped, permutations_of_order, CanonicalPatternList, PatternClass, Permutation};
use crate::permuton::{Permuton, StepUp};
use crate::rational::{from_f64, to_f64, Rational};
use crate::spectra::{borsuk_pair_search, BorsukConfig, BorsukProblem};

const MAX_FAMILY_ORDER: usize = 8;

/// Largest power of two not exceeding `r > 0`, as an exact rational.
fn power_of_two_floor(r: &Rational) -> Rational {
    let two = Rational::from_integer(2.into());
    let mut p = Rational::from_integer(1.into());
    while &p > r {
        p /= &two;
    }
    while &(&p * &two) <= r {
        p *= &two;
    }
    p
}

/// Smallest `n > m` with at least `need` thorough indecomposable
/// permutations of order `n`.
fn family_order(m: usize, need: usize) -> Result<usize> {
    for n in m + 1..=MAX_FAMILY_ORDER {
        let count = enumerate_patterns_capped(n, PatternClass::Thorough, MAX_FAMILY_ORDER)?
            .iter()
            .filter(|p| p.len() == n && p.is_indecomposable())
            .count();
        if count >= need {
            return Ok(n);
        }
    }
    Err(Error::SearchFailed(format!(
        "no order up to {MAX_FAMILY_ORDER} has {need} thorough indecomposable permutations"
    )))
}

/// Builds `τ_1..τ_K` with separation witnesses: `τ_1` is the first canonical
/// pattern of order `q_start` separated by its balanced step-up from the
/// identity permuton; each later `τ_k` comes from an antipodal pair whose
/// direct sums agree on all patterns of order `|τ_{k-1}|`. Weights follow
/// `α_k = min(4^{-k}, α_{k-1} γ_{k-1} / 8)` rounded down to a power of two.
pub fn build_oscillating_param(q_start: usize, k_max: usize, seed: u64) -> Result<FBulletParam> {
    if q_start < 2 || k_max == 0 {
        return Err(Error::InvalidArgument(
            "the starting order must be at least 2 and at least one pattern is required".into(),
        ));
    }
    let first = CanonicalPatternList::new(q_start)?
        .patterns()
        .iter()
        .find(|p| p.len() == q_start)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("no canonical pattern of order {q_start}")))?;
    let phi = Permuton::StepUp(StepUp::balanced(first.clone()));
    let gamma = phi.density(&first);
    let mut taus = vec![first];
    let mut gammas = vec![GammaWitness {
        gamma,
        phi,
        phi_prime: Permuton::Identity,
        low_order: 1,
        matching_error: 0.0,
    }];
    for k in 2..=k_max {
        let m = taus[k - 2].len();
        let targets: Vec<Permutation> = permutations_of_order(m).filter(|p| !p.is_identity()).collect();
        let need = targets.len() + 1;
        let n = family_order(m, need)?;
        let problem = BorsukProblem::with_default_family(targets, n)?;
        let pair = borsuk_pair_search(&problem, seed.wrapping_add(k as u64), &BorsukConfig::default())?;
        if !pair.converged {
            return Err(Error::SearchFailed(format!(
                "antipodal pair search for index {k} stopped at residual {:e}",
                pair.residual
            )));
        }
        let v: Vec<Rational> = pair.v.iter().map(|&x| from_f64(x)).collect();
        let w: Vec<Rational> = pair.v_prime.iter().map(|&x| from_f64(x)).collect();
        let phi = problem.permuton(&v)?;
        let phi_prime = problem.permuton(&w)?;
        let tau = pair.witness_pattern.clone();
        let gamma = phi.density(&tau) - phi_prime.density(&tau);
        if !gamma.is_positive() {
            return Err(Error::Internal(format!("separation for index {k} is not positive")));
        }
        let matching_error = problem
            .gamma_exact(&v)
            .iter()
            .zip(problem.gamma_exact(&w))
            .map(|(a, b)| to_f64(&(a - b).abs()))
            .fold(0.0, f64::max);
        taus.push(tau);
        gammas.push(GammaWitness {
            gamma,
            phi,
            phi_prime,
            low_order: m,
            matching_error,
        });
    }
    let mut alphas: Vec<Rational> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let geometric = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(4), k));
        let cap = match alphas.last() {
            None => geometric,
            Some(prev) => {
                let linked = prev * &gammas[k - 2].gamma / Rational::from_integer(8.into());
                if linked < geometric {
                    linked
                } else {
                    geometric
                }
            }
        };
        debug_assert!(!cap.is_zero());
        alphas.push(power_of_two_floor(&cap));
    }
    FBulletParam::new(taus, alphas, gammas.into_iter().map(Some).collect())
}
