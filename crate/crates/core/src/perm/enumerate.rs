use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};

/// Largest order enumerated unless the caller raises the cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternClass {
    All,
    /// Includes the trivial permutation `(1)`.
    Indecomposable,
    /// Indecomposable of order at least two.
    NonTrivialIndecomposable,
    Simple,
    Thorough,
}

impl PatternClass {
    pub fn contains(self, p: &Permutation) -> bool {
        match self {
            PatternClass::All => true,
            PatternClass::Indecomposable => p.is_indecomposable(),
            PatternClass::NonTrivialIndecomposable => p.len() > 1 && p.is_indecomposable(),
            PatternClass::Simple => p.is_simple(),
            PatternClass::Thorough => p.is_thorough(),
        }
    }
}

impl std::str::FromStr for PatternClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => PatternClass::All,
            "indecomposable" => PatternClass::Indecomposable,
            "non-trivial-indecomposable" => PatternClass::NonTrivialIndecomposable,
            "simple" => PatternClass::Simple,
            "thorough" => PatternClass::Thorough,
            _ => return Err(Error::InvalidArgument(format!("unknown pattern class {s:?}"))),
        })
    }
}

pub fn check_cap(q: usize, cap: usize) -> Result<()> {
    if q > cap {
        Err(Error::SizeLimit { requested: q, cap })
    } else {
        Ok(())
    }
}

/// All permutations of order exactly `n`, lexicographic.
pub fn permutations_of_order(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n)
        .permutations(n)
        .map(Permutation::from_zero_based_unchecked)
}

/// Permutations of order `1..=q` in `class`, sorted canonically (inversion
/// count, then order, then one-line notation).
pub fn enumerate_patterns_capped(q: usize, class: PatternClass, cap: usize) -> Result<Vec<Permutation>> {
    if q == 0 {
        return Err(Error::InvalidArgument("order bound must be at least 1".into()));
    }
    check_cap(q, cap)?;
    let mut out: Vec<Permutation> = (1..=q)
        .flat_map(permutations_of_order)
        .filter(|p| class.contains(p))
        .collect();
    out.sort_by_cached_key(Permutation::canonical_key);
    Ok(out)
}

pub fn enumerate_patterns(q: usize, class: PatternClass) -> Result<Vec<Permutation>> {
    enumerate_patterns_capped(q, class, DEFAULT_ENUMERATION_CAP)
}

/// The non-trivial indecomposable permutations of order at most `q`,
/// indexed canonically. Density vectors and the matrices acting on them
/// are indexed by this list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalPatternList {
    q: usize,
    patterns: Vec<Permutation>,
}

impl CanonicalPatternList {
    pub fn new(q: usize) -> Result<Self> {
        Self::with_cap(q, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(q: usize, cap: usize) -> Result<Self> {
        let patterns = enumerate_patterns_capped(q, PatternClass::NonTrivialIndecomposable, cap)?;
        Ok(CanonicalPatternList { q, patterns })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.patterns.iter().position(|x| x == p)
    }
}
