//! Exact counts of occurrences, monomorphisms and homomorphisms.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::fast::count_occurrences_small;
use super::Permutation;
use crate::rational::{binomial, ratio, Rational};

/// Sizes of `Occ`, `Mon` and `Hom` for a pattern in a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub occ: u64,
    pub mon: u64,
    pub hom: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Occurrence,
    Monomorphism,
    Homomorphism,
}

/// Texts up to this order are always counted by backtracking.
const BACKTRACK_MAX_TEXT: usize = 64;

/// Backtracking over increasing (or, for homomorphisms, non-decreasing)
/// index tuples. Each partial tuple fixes an open value window for the
/// next entry, which is the only pruning needed.
struct Search<'a> {
    pattern: &'a [usize],
    text: &'a [usize],
    mode: Mode,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn window(&self, j: usize) -> (Option<usize>, Option<usize>) {
        let pj = self.pattern[j];
        let mut lo = None;
        let mut hi: Option<usize> = None;
        for (i, &pos) in self.chosen.iter().enumerate() {
            let v = self.text[pos];
            if self.pattern[i] > pj {
                hi = Some(hi.map_or(v, |h| h.min(v)));
            } else if self.mode == Mode::Occurrence {
                lo = Some(lo.map_or(v, |l: usize| l.max(v)));
            }
        }
        (lo, hi)
    }

    fn run(&mut self) -> u64 {
        let j = self.chosen.len();
        let k = self.pattern.len();
        let n = self.text.len();
        let (lo, hi) = self.window(j);
        let start = match (self.chosen.last(), self.mode) {
            (None, _) => 0,
            (Some(&p), Mode::Homomorphism) => p,
            (Some(&p), _) => p + 1,
        };
        let end = match self.mode {
            Mode::Homomorphism => n,
            _ => (n + 1 + j).saturating_sub(k),
        };
        let fits = |v: usize| lo.is_none_or(|l| v > l) && hi.is_none_or(|h| v < h);
        if j + 1 == k {
            return (start..end).filter(|&pos| fits(self.text[pos])).count() as u64;
        }
        let mut total = 0;
        for pos in start..end {
            if fits(self.text[pos]) {
                self.chosen.push(pos);
                total += self.run();
                self.chosen.pop();
            }
        }
        total
    }
}

fn backtrack(pattern: &Permutation, text: &Permutation, mode: Mode) -> u64 {
    let (k, n) = (pattern.len(), text.len());
    if mode != Mode::Homomorphism && k > n {
        return 0;
    }
    Search {
        pattern: pattern.values(),
        text: text.values(),
        mode,
        chosen: Vec::with_capacity(k),
    }
    .run()
}

/// Exhaustive backtracking counters, used directly for small inputs and as
/// the reference for the faster paths.
pub mod backtracking {
    use super::*;

    pub fn occurrences(pattern: &Permutation, text: &Permutation) -> u64 {
        backtrack(pattern, text, Mode::Occurrence)
    }

    pub fn monomorphisms(pattern: &Permutation, text: &Permutation) -> u64 {
        backtrack(pattern, text, Mode::Monomorphism)
    }

    pub fn homomorphisms(pattern: &Permutation, text: &Permutation) -> u64 {
        backtrack(pattern, text, Mode::Homomorphism)
    }
}

/// `Λ(π, σ)`: strictly increasing maps inducing `pattern` in `text`.
pub fn count_occurrences(pattern: &Permutation, text: &Permutation) -> u64 {
    if text.len() > BACKTRACK_MAX_TEXT {
        if let Some(c) = count_occurrences_small(pattern.values(), text.values()) {
            return c;
        }
    }
    backtracking::occurrences(pattern, text)
}

/// `Λ_mon(π, σ)`: strictly increasing inversion-preserving maps.
pub fn count_monomorphisms(pattern: &Permutation, text: &Permutation) -> u64 {
    if text.len() > BACKTRACK_MAX_TEXT && pattern.len() <= 4 {
        return dominating_patterns(pattern)
            .iter()
            .map(|p| count_occurrences(p, text))
            .sum();
    }
    backtracking::monomorphisms(pattern, text)
}

/// `Λ_hom(π, σ)`: non-decreasing inversion-preserving maps.
pub fn count_homomorphisms(pattern: &Permutation, text: &Permutation) -> u64 {
    backtracking::homomorphisms(pattern, text)
}

pub fn count_patterns(pattern: &Permutation, text: &Permutation) -> PatternCounts {
    PatternCounts {
        occ: count_occurrences(pattern, text),
        mon: count_monomorphisms(pattern, text),
        hom: count_homomorphisms(pattern, text),
    }
}

/// All patterns of the same order as `pattern` containing all of its
/// inversions, in lexicographic order.
pub fn dominating_patterns(pattern: &Permutation) -> Vec<Permutation> {
    let k = pattern.len();
    (0..k)
        .permutations(k)
        .map(Permutation::from_zero_based_unchecked)
        .filter(|p| pattern.is_dominated_by(p))
        .collect()
}

fn normalized(count: u64, n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::from_integer(0.into());
    }
    ratio(count.into(), binomial(n as u64, k as u64))
}

/// `t(π, σ)`; zero when the pattern is longer than the text.
pub fn density(pattern: &Permutation, text: &Permutation) -> Rational {
    normalized(count_occurrences(pattern, text), text.len(), pattern.len())
}

pub fn density_mon(pattern: &Permutation, text: &Permutation) -> Rational {
    normalized(count_monomorphisms(pattern, text), text.len(), pattern.len())
}

/// `t_hom(π, σ)` with denominator `C(n+k-1, k)`, applied even when `k > n`.
pub fn density_hom(pattern: &Permutation, text: &Permutation) -> Rational {
    let (n, k) = (text.len() as u64, pattern.len() as u64);
    ratio(
        count_homomorphisms(pattern, text).into(),
        binomial(n + k - 1, k),
    )
}
