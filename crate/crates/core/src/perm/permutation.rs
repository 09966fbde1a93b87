use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `[n]`, `n >= 1`.
///
/// Values are kept 0-based internally; parsing, display and [`one_line`]
/// use the usual 1-based one-line notation.
///
/// [`one_line`]: Permutation::one_line
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-based one-line notation.
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::NotAPermutation(
                "values are 1-based; found 0".to_string(),
            ));
        }
        Self::from_zero_based(one_line.into_iter().map(|v| v - 1).collect())
    }

    pub fn from_zero_based(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::NotAPermutation("empty sequence".to_string()));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v >= n {
                return Err(Error::NotAPermutation(format!(
                    "value {} out of range 1..={n}",
                    v + 1
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!(
                    "value {} repeated",
                    v + 1
                )));
            }
        }
        Ok(Permutation { values })
    }

    /// Caller guarantees `values` is a bijection on `0..len`.
    pub(crate) fn from_zero_based_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Self::from_zero_based(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (0..n).collect(),
        }
    }

    pub fn reverse(n: usize) -> Self {
        Permutation {
            values: (0..n).rev().collect(),
        }
    }

    /// The pattern (relative order) of a sequence of distinct keys.
    pub fn standardize<T: PartialOrd>(keys: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).expect("comparable keys"));
        let mut values = vec![0; keys.len()];
        for (rank, &i) in idx.iter().enumerate() {
            values[i] = rank;
        }
        Permutation { values }
    }

    /// Pattern induced by the given increasing positions (0-based).
    pub fn pattern_at(&self, positions: &[usize]) -> Self {
        let keys: Vec<usize> = positions.iter().map(|&p| self.values[p]).collect();
        Self::standardize(&keys)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: permutations have order at least one.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// 0-based values.
    #[inline]
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.values.iter().map(|v| v + 1).collect()
    }

    /// All inversions `(i, j)`, 1-based, `i < j` and `p(i) > p(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.values[i] > self.values[j] {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn inversion_count(&self) -> u64 {
        crate::perm::fast::count_inversions(&self.values)
    }

    /// Positions `b` in `0..=n` such that the prefix of length `b` maps onto
    /// `[b]`. Always contains `0` and `n`.
    pub fn cuts(&self) -> Vec<usize> {
        let mut out = vec![0];
        let mut max = 0;
        for (i, &v) in self.values.iter().enumerate() {
            max = max.max(v + 1);
            if max == i + 1 {
                out.push(i + 1);
            }
        }
        out
    }

    pub fn is_indecomposable(&self) -> bool {
        self.cuts().len() == 2
    }

    /// No interval of length at least two, other than the whole domain, is
    /// mapped onto an interval.
    pub fn is_simple(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            let (mut lo, mut hi) = (self.values[a], self.values[a]);
            for b in a + 1..n {
                lo = lo.min(self.values[b]);
                hi = hi.max(self.values[b]);
                if hi - lo == b - a && !(a == 0 && b == n - 1) {
                    return false;
                }
            }
        }
        true
    }

    /// No position continues an ascending run of consecutive values.
    pub fn is_thorough(&self) -> bool {
        self.values.windows(2).all(|w| w[1] != w[0] + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    /// `self` followed by `other` shifted above it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len();
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|v| v + n));
        Permutation { values }
    }

    /// True if every inversion of `self` is an inversion of `other`, i.e. the
    /// identity map is a monomorphism from `self` to `other`.
    pub fn is_dominated_by(&self, other: &Permutation) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let (p, q) = (&self.values, &other.values);
        (0..p.len()).all(|i| (i + 1..p.len()).all(|j| p[i] < p[j] || q[i] > q[j]))
    }

    /// Sort key for the canonical pattern order: inversion count, then
    /// order, then one-line notation.
    pub fn canonical_key(&self) -> (u64, usize, Vec<usize>) {
        (self.inversion_count(), self.len(), self.values.clone())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses comma-separated 1-based one-line notation such as `"2,4,1,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, token) in s.split(',').enumerate() {
            let t = token.trim();
            let v: usize = t.parse().map_err(|_| Error::Parse {
                token: t.to_string(),
                position: i + 1,
                reason: if t.is_empty() {
                    "empty token".to_string()
                } else {
                    "not a positive integer".to_string()
                },
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    token: t.to_string(),
                    position: i + 1,
                    reason: "values are 1-based".to_string(),
                });
            }
            values.push(v);
        }
        let n = values.len();
        let mut first_seen = vec![0usize; n + 1];
        for (i, &v) in values.iter().enumerate() {
            if v > n {
                return Err(Error::Parse {
                    token: v.to_string(),
                    position: i + 1,
                    reason: format!("value exceeds the order {n}"),
                });
            }
            if first_seen[v] != 0 {
                return Err(Error::Parse {
                    token: v.to_string(),
                    position: i + 1,
                    reason: format!("duplicate of token {}", first_seen[v]),
                });
            }
            first_seen[v] = i + 1;
        }
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
