//! Compressive partitions: ordered interval partitions of `[k]` on whose
//! blocks a permutation acts as a rigid shift, and the quotient patterns
//! obtained by shrinking every block to a point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompressivePartition {
    /// Inclusive 1-based `(start, end)` pairs covering `[k]` left to right.
    blocks: Vec<(usize, usize)>,
    /// `tau(a) - a` on each block.
    shifts: Vec<i64>,
}

impl CompressivePartition {
    /// Validates `blocks` against `tau` and records the shifts.
    pub fn new(tau: &Permutation, blocks: Vec<(usize, usize)>) -> Result<Self> {
        let k = tau.len();
        let mut next = 1;
        let mut shifts = Vec::with_capacity(blocks.len());
        for &(s, e) in &blocks {
            if s != next || e < s || e > k {
                return Err(Error::contract(format!(
                    "blocks {blocks:?} do not partition [1,{k}] into consecutive intervals"
                )));
            }
            let shift = tau.values()[s - 1] as i64 - (s as i64 - 1);
            for a in s..=e {
                if tau.values()[a - 1] as i64 - (a as i64 - 1) != shift {
                    return Err(Error::contract(format!(
                        "block [{s},{e}] is not shifted rigidly by {tau}"
                    )));
                }
            }
            shifts.push(shift);
            next = e + 1;
        }
        if next != k + 1 {
            return Err(Error::contract(format!(
                "blocks {blocks:?} do not cover [1,{k}]"
            )));
        }
        Ok(CompressivePartition { blocks, shifts })
    }

    pub fn singletons(tau: &Permutation) -> Self {
        let blocks = (1..=tau.len()).map(|i| (i, i)).collect();
        Self::new(tau, blocks).expect("singletons are always compressive")
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|&(s, e)| e - s + 1)
    }

    /// Block contents as explicit lists, e.g. `[[1,2],[3],[4,5]]`.
    pub fn as_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&(s, e)| (s..=e).collect()).collect()
    }

    fn is_valid_for(&self, tau: &Permutation) -> bool {
        Self::new(tau, self.blocks.clone()).is_ok_and(|p| p.shifts == self.shifts)
    }
}

/// Every compressive partition of `tau`, starting with the singleton
/// partition. Candidates are the `2^(k-1)` compositions of `[k]`.
pub fn enumerate_compressive(tau: &Permutation) -> Vec<CompressivePartition> {
    let k = tau.len();
    let v = tau.values();
    let gaps = k - 1;
    let mut out = Vec::new();
    // bit i set: cut between positions i and i+1 (0-based)
    for mask in (0u64..1 << gaps).rev() {
        let joins_ok = (0..gaps).all(|i| mask >> i & 1 == 1 || v[i + 1] == v[i] + 1);
        if !joins_ok {
            continue;
        }
        let mut blocks = Vec::new();
        let mut start = 1;
        for i in 0..gaps {
            if mask >> i & 1 == 1 {
                blocks.push((start, i + 1));
                start = i + 2;
            }
        }
        blocks.push((start, k));
        out.push(CompressivePartition::new(tau, blocks).expect("filtered composition"));
    }
    out
}

/// `tau / part`: the pattern of one representative per block.
pub fn quotient(tau: &Permutation, part: &CompressivePartition) -> Result<Permutation> {
    if !part.is_valid_for(tau) {
        return Err(Error::contract(format!(
            "{:?} is not a compressive partition of {tau}",
            part.as_lists()
        )));
    }
    let reps: Vec<usize> = part.blocks.iter().map(|&(s, _)| s - 1).collect();
    Ok(tau.pattern_at(&reps))
}
