//! Exact pattern densities in constructive permutons, plus Monte Carlo
//! estimators used to cross-check them.
//!
//! Step-up permutons are handled segment by segment: `k` sorted sample
//! points split into runs on distinct segments, each run is a rigidly
//! shifted block of the pattern, so the pattern decomposes along a
//! compressive partition whose quotient must occur in the segment layout.
//! The diagonal tail is one more segment placed after all others, which
//! makes the same sum valid for decomposable patterns.
//!
//! Direct sums split the sorted points into consecutive groups, one per
//! block; a group in block `j` contributes the density of its sub-pattern in
//! the block's permuton. Only splits at cut points of the pattern occur.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Permuton, PointSampler, StepUp};
use crate::compressive::{enumerate_compressive, quotient};
use crate::error::{Error, Result};
use crate::perm::{dominating_patterns, Permutation};
use crate::rational::{factorial, Rational, Scalar};
use crate::rng;

fn factorial_usize(n: usize) -> usize {
    (1..=n).product()
}

fn is_increasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn is_decreasing(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] > w[1])
}

/// Calls `f` with the positions of every occurrence of `pattern` in `text`.
fn for_each_occurrence(pattern: &[usize], text: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn go(
        pattern: &[usize],
        text: &[usize],
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        let j = chosen.len();
        if j == pattern.len() {
            f(chosen);
            return;
        }
        let start = chosen.last().map_or(0, |&p| p + 1);
        let end = text.len() + j + 1 - pattern.len();
        for pos in start..end {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(i, &c)| (pattern[i] < pattern[j]) == (text[c] < text[pos]));
            if ok {
                chosen.push(pos);
                go(pattern, text, chosen, f);
                chosen.pop();
            }
        }
    }
    if pattern.len() <= text.len() {
        go(pattern, text, &mut Vec::with_capacity(pattern.len()), f);
    }
}

/// `k! Σ_P Σ_ψ Π w_ψ(i)^|P_i| / |P_i|!` over compressive partitions `P` of
/// `tau` and occurrences `ψ` of `tau/P` among the segments.
fn segment_sum<T: Scalar>(tau: &Permutation, segments: &[usize], w: &[T]) -> T {
    let k = tau.len();
    let mut total = T::zero();
    for part in enumerate_compressive(tau) {
        let q = quotient(tau, &part).expect("enumerated partition");
        let sizes: Vec<usize> = part.block_sizes().collect();
        let denom: usize = sizes.iter().map(|&s| factorial_usize(s)).product();
        let mut acc = T::zero();
        for_each_occurrence(q.values(), segments, &mut |psi| {
            let term = psi
                .iter()
                .zip(&sizes)
                .fold(T::one(), |t, (&seg, &s)| t * w[seg].powi(s));
            acc = acc.clone() + term;
        });
        total = total + acc.div_usize(denom);
    }
    total * T::from_usize(factorial_usize(k))
}

/// Dynamic program over the cut points of a pattern for a direct sum whose
/// blocks have masses `weights`; `child(j, a, b)` is the density in block
/// `j` of the sub-pattern between cut indices `a <= b`.
pub(crate) fn cut_sum<T: Scalar>(
    cuts: &[usize],
    weights: &[T],
    child: &dyn Fn(usize, usize, usize) -> T,
) -> T {
    let m = cuts.len();
    let k = cuts[m - 1];
    let mut dp = vec![T::zero(); m];
    dp[0] = T::one();
    for (j, w) in weights.iter().enumerate() {
        let mut next = vec![T::zero(); m];
        for b in 0..m {
            for a in 0..=b {
                if dp[a].is_zero() {
                    continue;
                }
                let len = cuts[b] - cuts[a];
                if len > 0 && w.is_zero() {
                    continue;
                }
                let c = child(j, a, b);
                if c.is_zero() {
                    continue;
                }
                let term = (dp[a].clone() * w.powi(len) * c).div_usize(factorial_usize(len));
                next[b] = next[b].clone() + term;
            }
        }
        dp = next;
    }
    dp[m - 1].clone() * T::from_usize(factorial_usize(k))
}

/// Sub-pattern of `tau` between two of its cut points.
fn cut_slice(tau: &[usize], from: usize, to: usize) -> Vec<usize> {
    tau[from..to].iter().map(|v| v - from).collect()
}

pub(crate) fn cuts_of(tau: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    let mut max = 0;
    for (i, &v) in tau.iter().enumerate() {
        max = max.max(v + 1);
        if max == i + 1 {
            out.push(i + 1);
        }
    }
    out
}

/// Density of an arbitrary (possibly empty) pattern, given 0-based values.
pub(crate) fn pattern_density<T: Scalar>(tau: &[usize], phi: &Permuton) -> T {
    let k = tau.len();
    if k == 0 {
        return T::one();
    }
    match phi {
        Permuton::Uniform => T::one().div_usize(factorial_usize(k)),
        Permuton::Identity => indicator(is_increasing(tau)),
        Permuton::Reverse => indicator(is_decreasing(tau)),
        Permuton::StepUp(s) => {
            let tail = s.tail();
            let mut segments = s.sigma().values().to_vec();
            let mut w: Vec<T> = s.weights().iter().map(T::from_rational).collect();
            if !tail.is_zero() {
                segments.push(segments.len());
                w.push(T::from_rational(&tail));
            }
            let tau = Permutation::from_zero_based_unchecked(tau.to_vec());
            segment_sum(&tau, &segments, &w)
        }
        Permuton::DirectSum(d) => {
            let cuts = cuts_of(tau);
            let mut w: Vec<T> = d.parts().iter().map(|(p, _)| T::from_rational(p)).collect();
            w.push(T::from_rational(&d.tail()));
            let parts = d.parts();
            let child = |j: usize, a: usize, b: usize| {
                let sub = cut_slice(tau, cuts[a], cuts[b]);
                match parts.get(j) {
                    Some((_, c)) => pattern_density(&sub, c),
                    None => indicator(is_increasing(&sub)),
                }
            };
            cut_sum(&cuts, &w, &child)
        }
    }
}

fn indicator<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

impl Permuton {
    /// Exact `t(τ, Φ)` for any pattern.
    pub fn density(&self, tau: &Permutation) -> Rational {
        pattern_density(tau.values(), self)
    }

    pub fn density_f64(&self, tau: &Permutation) -> f64 {
        pattern_density(tau.values(), self)
    }
}

fn require_nontrivial_indecomposable(tau: &Permutation) -> Result<()> {
    if tau.len() < 2 || !tau.is_indecomposable() {
        return Err(Error::contract(format!(
            "pattern {tau} must be non-trivial and indecomposable"
        )));
    }
    Ok(())
}

/// Exact density of a non-trivial indecomposable `tau` in the step-up
/// permuton of `sigma` with segment masses `weights`.
pub fn density_stepup(tau: &Permutation, sigma: &Permutation, weights: &[Rational]) -> Result<Rational> {
    require_nontrivial_indecomposable(tau)?;
    let s = StepUp::new(sigma.clone(), weights.to_vec())?;
    Ok(segment_sum(tau, s.sigma().values(), s.weights()))
}

/// Density of a non-trivial indecomposable pattern in a permuton, using
/// only the indecomposable-pattern rules: all points of an indecomposable
/// pattern fall into one direct-sum block, and none on a diagonal tail.
fn indecomposable_density(tau: &Permutation, phi: &Permuton) -> Rational {
    let k = tau.len();
    match phi {
        Permuton::StepUp(s) => segment_sum(tau, s.sigma().values(), s.weights()),
        Permuton::DirectSum(d) => d
            .parts()
            .iter()
            .map(|(x, child)| num_traits::pow(x.clone(), k) * indecomposable_density(tau, child))
            .sum(),
        Permuton::Uniform => Rational::new(1.into(), factorial(k).into()),
        Permuton::Identity => Rational::zero(),
        Permuton::Reverse => {
            if tau.is_decreasing() {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
    }
}

/// `Σ x_i^k t(τ, Φ_i)` for a non-trivial indecomposable `tau` of order `k`
/// in the direct sum of `parts`; the leftover identity block contributes
/// nothing.
pub fn density_dsum(tau: &Permutation, parts: &[(Rational, Permuton)]) -> Result<Rational> {
    require_nontrivial_indecomposable(tau)?;
    let phi = Permuton::direct_sum(parts.to_vec())?;
    let tail_contribution = pattern_density::<Rational>(tau.values(), &Permuton::Identity);
    if !tail_contribution.is_zero() {
        return Err(Error::Internal(format!(
            "indecomposable {tau} has non-zero identity density"
        )));
    }
    Ok(indecomposable_density(tau, &phi))
}

/// Monomorphism density: the sum of `t(τ', Φ)` over the patterns `τ'` of
/// the same order that contain every inversion of `tau`.
pub fn density_mon_permuton(tau: &Permutation, phi: &Permuton) -> Result<Rational> {
    phi.validate()?;
    Ok(dominating_patterns(tau).iter().map(|t| phi.density(t)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    fn from_hits(hits: u64, samples: usize) -> Self {
        let p = hits as f64 / samples as f64;
        McEstimate {
            estimate: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }
}

fn mc_frequency(
    phi: &Permuton,
    k: usize,
    samples: usize,
    seed: u64,
    hit: &(dyn Fn(&Permutation) -> bool + Sync),
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let sampler = PointSampler::new(phi);
    let blocks: Vec<_> = rng::blocks(samples).collect();
    let hits: u64 = blocks
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = rng::block_rng(seed, b);
            (0..len)
                .filter(|_| hit(&sampler.permutation(k, &mut rng)))
                .count() as u64
        })
        .sum();
    Ok(McEstimate::from_hits(hits, samples))
}

/// Frequency of `tau` among `samples` Φ-random permutations of order `|tau|`.
pub fn density_mc(tau: &Permutation, phi: &Permuton, samples: usize, seed: u64) -> Result<McEstimate> {
    mc_frequency(phi, tau.len(), samples, seed, &|p| p == tau)
}

/// Frequency with which the identity map is a monomorphism from `tau` into
/// a Φ-random permutation of order `|tau|`.
pub fn density_mon_mc(tau: &Permutation, phi: &Permuton, samples: usize, seed: u64) -> Result<McEstimate> {
    mc_frequency(phi, tau.len(), samples, seed, &|p| tau.is_dominated_by(p))
}

/// Frequencies of every pattern of order `k` from one batch of samples,
/// keyed by 0-based one-line values.
pub fn pattern_frequencies(
    phi: &Permuton,
    k: usize,
    samples: usize,
    seed: u64,
) -> std::collections::BTreeMap<Permutation, u64> {
    let sampler = PointSampler::new(phi);
    let blocks: Vec<_> = rng::blocks(samples).collect();
    blocks
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = rng::block_rng(seed, b);
            let mut m = std::collections::BTreeMap::new();
            for _ in 0..len {
                *m.entry(sampler.permutation(k, &mut rng)).or_insert(0u64) += 1;
            }
            m
        })
        .reduce(std::collections::BTreeMap::new, |mut a, b| {
            for (p, c) in b {
                *a.entry(p).or_insert(0) += c;
            }
            a
        })
}


/// Densities of fixed target patterns in the direct sums `⊕(x_i, Φ_i)` of a
/// fixed list of blocks, viewed as polynomials in the block masses `x`.
#[derive(Debug, Clone)]
pub struct DirectSumFamily {
    children: Vec<Permuton>,
    targets: Vec<Permutation>,
    tables: Vec<CutTable>,
}

/// Child densities of one target between pairs of its cut points, indexed
/// `[block][a][b]`; the last block is the identity tail.
#[derive(Debug, Clone)]
struct CutTable {
    cuts: Vec<usize>,
    exact: Vec<Vec<Vec<Rational>>>,
    float: Vec<Vec<Vec<f64>>>,
}

impl DirectSumFamily {
    pub fn new(children: Vec<Permuton>, targets: Vec<Permutation>) -> Self {
        let tables = targets
            .iter()
            .map(|tau| {
                let cuts = cuts_of(tau.values());
                let m = cuts.len();
                let exact: Vec<Vec<Vec<Rational>>> = (0..=children.len())
                    .map(|j| {
                        (0..m)
                            .map(|a| {
                                (0..m)
                                    .map(|b| {
                                        if b < a {
                                            return Rational::zero();
                                        }
                                        let sub = cut_slice(tau.values(), cuts[a], cuts[b]);
                                        match children.get(j) {
                                            Some(c) => pattern_density(&sub, c),
                                            None => indicator(is_increasing(&sub)),
                                        }
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                let float = exact
                    .iter()
                    .map(|rows| {
                        rows.iter()
                            .map(|row| row.iter().map(crate::rational::to_f64).collect())
                            .collect()
                    })
                    .collect();
                CutTable { cuts, exact, float }
            })
            .collect();
        DirectSumFamily {
            children,
            targets,
            tables,
        }
    }

    pub fn children(&self) -> &[Permuton] {
        &self.children
    }

    pub fn targets(&self) -> &[Permutation] {
        &self.targets
    }

    fn masses<T: Scalar>(x: &[T]) -> Vec<T> {
        let mut w = x.to_vec();
        let tail = x.iter().fold(T::one(), |acc, xi| acc - xi.clone());
        w.push(tail);
        w
    }

    /// Exact target densities at block masses `x`; no validity check on `x`.
    pub fn eval_exact(&self, x: &[Rational]) -> Vec<Rational> {
        let w = Self::masses(x);
        self.tables
            .iter()
            .map(|t| cut_sum(&t.cuts, &w, &|j, a, b| t.exact[j][a][b].clone()))
            .collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        let w = Self::masses(x);
        self.tables
            .iter()
            .map(|t| cut_sum(&t.cuts, &w, &|j, a, b| t.float[j][a][b]))
            .collect()
    }

    /// The direct sum itself, validated.
    pub fn permuton(&self, x: &[Rational]) -> Result<Permuton> {
        Permuton::direct_sum(x.iter().cloned().zip(self.children.iter().cloned()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{permutations_of_order, CanonicalPatternList};
    use crate::rational::rat;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn stepup_examples() {
        let half = vec![rat(1, 2), rat(1, 2)];
        assert_eq!(density_stepup(&p("2,1"), &p("2,1"), &half).unwrap(), rat(1, 2));
        assert_eq!(density_stepup(&p("2,1"), &p("1,2"), &half).unwrap(), rat(0, 1));
        assert!(matches!(density_stepup(&p("1"), &p("2,1"), &half), Err(Error::Contract(_))));
        assert!(matches!(density_stepup(&p("1,3,2"), &p("2,1"), &half), Err(Error::Contract(_))));
        // (2,3,1) collapses onto (2,1) via the partition {1,2},{3}
        let w = vec![rat(1, 3), rat(1, 5)];
        assert_eq!(
            density_stepup(&p("2,3,1"), &p("2,1"), &w).unwrap(),
            rat(6, 1) * rat(1, 9) / rat(2, 1) * rat(1, 5)
        );
    }

    #[test]
    fn general_density_sums_to_one() {
        let phis = [
            Permuton::step_up(p("2,4,3,1"), vec![rat(1, 6), rat(1, 4), rat(1, 12), rat(1, 4)]).unwrap(),
            Permuton::direct_sum(vec![
                (rat(1, 3), Permuton::Uniform),
                (rat(1, 4), Permuton::Reverse),
                (rat(1, 5), Permuton::step_up(p("3,1,2"), vec![rat(1, 3); 3]).unwrap()),
            ])
            .unwrap(),
        ];
        for phi in &phis {
            for k in 1..=4 {
                let total: Rational = permutations_of_order(k).map(|t| phi.density(&t)).sum();
                assert_eq!(total, Rational::one(), "order {k} in {}", phi.to_json_string());
            }
        }
    }

    #[test]
    fn general_and_indecomposable_routes_agree() {
        let phi = Permuton::direct_sum(vec![
            (rat(1, 3), Permuton::step_up(p("2,4,3,1"), vec![rat(1, 6), rat(1, 4), rat(1, 12), rat(1, 4)]).unwrap()),
            (rat(1, 6), Permuton::Uniform),
            (rat(1, 4), Permuton::Reverse),
        ])
        .unwrap();
        let Permuton::DirectSum(d) = &phi else { unreachable!() };
        for tau in CanonicalPatternList::new(4).unwrap().patterns() {
            assert_eq!(density_dsum(tau, d.parts()).unwrap(), phi.density(tau), "{tau}");
        }
    }

    #[test]
    fn dsum_examples() {
        let inner = Permuton::step_up(p("3,1,2"), vec![rat(1, 4), rat(1, 4), rat(1, 3)]).unwrap();
        let tau = p("2,1");
        let t = inner.density(&tau);
        let two = vec![(rat(1, 2), inner.clone()), (rat(1, 2), inner.clone())];
        assert_eq!(density_dsum(&tau, &two).unwrap(), t.clone() / rat(2, 1));
        // single part of weight one is the part itself
        assert_eq!(density_dsum(&tau, &[(rat(1, 1), inner.clone())]).unwrap(), t);
        // leftover identity mass adds nothing for an inversion
        let short = vec![(rat(1, 3), Permuton::Reverse)];
        assert_eq!(density_dsum(&tau, &short).unwrap(), rat(1, 9));
    }

    #[test]
    fn leaf_permutons() {
        assert_eq!(Permuton::Uniform.density(&p("2,4,1,3")), rat(1, 24));
        assert_eq!(Permuton::Identity.density(&p("1,2,3")), rat(1, 1));
        assert_eq!(Permuton::Identity.density(&p("2,1")), rat(0, 1));
        assert_eq!(Permuton::Reverse.density(&p("3,2,1")), rat(1, 1));
    }

    #[test]
    fn mon_density_rules() {
        let tau = p("2,1");
        let phi = Permuton::step_up(p("2,3,1"), vec![rat(1, 5), rat(1, 3), rat(1, 4)]).unwrap();
        assert_eq!(density_mon_permuton(&tau, &phi).unwrap(), phi.density(&tau));
        // uniform: dominating patterns of (2,3,1) are itself and (3,2,1)
        assert_eq!(density_mon_permuton(&p("2,3,1"), &Permuton::Uniform).unwrap(), rat(2, 6));
        assert_eq!(density_mon_permuton(&p("3,1,2"), &Permuton::Identity).unwrap(), rat(0, 1));
    }

    #[test]
    fn family_matches_general_density() {
        let children = vec![
            Permuton::step_up(p("3,2,1"), vec![rat(1, 3); 3]).unwrap(),
            Permuton::Uniform,
            Permuton::step_up(p("2,4,1,3"), vec![rat(1, 5), rat(1, 7), rat(1, 4), rat(1, 6)]).unwrap(),
        ];
        let targets: Vec<_> = permutations_of_order(3).chain(permutations_of_order(4)).collect();
        let fam = DirectSumFamily::new(children, targets.clone());
        let x = vec![rat(1, 4), rat(1, 5), rat(2, 7)];
        let phi = fam.permuton(&x).unwrap();
        let exact = fam.eval_exact(&x);
        let xf: Vec<f64> = x.iter().map(crate::rational::to_f64).collect();
        let float = fam.eval_f64(&xf);
        for (i, tau) in targets.iter().enumerate() {
            assert_eq!(exact[i], phi.density(tau), "{tau}");
            assert!((float[i] - crate::rational::to_f64(&exact[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn mc_basics() {
        let est = density_mc(&p("2,1"), &Permuton::Uniform, 20_000, 1).unwrap();
        assert!((est.estimate - 0.5).abs() < 4.0 * est.std_error.max(1e-3));
        let est = density_mc(&p("2,1"), &Permuton::Identity, 1000, 1).unwrap();
        assert_eq!(est.estimate, 0.0);
        assert!(density_mc(&p("2,1"), &Permuton::Identity, 0, 1).is_err());
    }
}
