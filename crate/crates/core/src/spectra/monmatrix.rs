use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::vector::{DensityKind, DensityVector};
use crate::error::{Error, Result};
use crate::perm::CanonicalPatternList;
use crate::rational::{int, Rational};

/// `M[i][j] = 1` when the identity map is a monomorphism from pattern `i`
/// to pattern `j` of the same order, so that `t_mon = M t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonMatrix {
    q: usize,
    entries: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformDirection {
    OccToMon,
    MonToOcc,
}

impl MonMatrix {
    /// Builds the matrix and certifies that it is unit upper triangular.
    pub fn new(patterns: &CanonicalPatternList) -> Result<Self> {
        let ps = patterns.patterns();
        let entries: Vec<Vec<u8>> = ps
            .iter()
            .map(|a| {
                ps.iter()
                    .map(|b| u8::from(a.len() == b.len() && a.is_dominated_by(b)))
                    .collect()
            })
            .collect();
        for (i, row) in entries.iter().enumerate() {
            if row[i] != 1 {
                return Err(Error::Internal(format!("diagonal entry {i} is not 1")));
            }
            if let Some(j) = (0..i).find(|&j| row[j] != 0) {
                return Err(Error::Internal(format!(
                    "entry ({i},{j}) below the diagonal is non-zero; canonical ordering is broken"
                )));
            }
        }
        Ok(MonMatrix {
            q: patterns.q(),
            entries,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_rational(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|&e| int(u64::from(e))).collect())
            .collect()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(&e, _)| e == 1)
                    .map(|(_, x)| x.clone())
                    .sum()
            })
            .collect()
    }

    /// Solves `M x = v` by back substitution.
    pub fn solve(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.len();
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = v[i].clone();
            for (e, xj) in self.entries[i][i + 1..].iter().zip(&x[i + 1..]) {
                if *e == 1 {
                    acc -= xj;
                }
            }
            x[i] = acc;
        }
        x
    }
}

pub fn transform_vector(
    v: &DensityVector,
    matrix: &MonMatrix,
    direction: TransformDirection,
) -> Result<DensityVector> {
    let (from, to) = match direction {
        TransformDirection::OccToMon => (DensityKind::Occurrence, DensityKind::Monomorphism),
        TransformDirection::MonToOcc => (DensityKind::Monomorphism, DensityKind::Occurrence),
    };
    if v.q != matrix.q || v.len() != matrix.len() {
        return Err(Error::InvalidArgument(format!(
            "vector of order bound {} and length {} does not match matrix of order bound {} and size {}",
            v.q,
            v.len(),
            matrix.q,
            matrix.len()
        )));
    }
    if v.kind != from {
        return Err(Error::InvalidArgument(format!(
            "expected a {from} vector, got a {} vector",
            v.kind
        )));
    }
    let values = match direction {
        TransformDirection::OccToMon => matrix.apply(&v.values),
        TransformDirection::MonToOcc => matrix.solve(&v.values),
    };
    Ok(DensityVector {
        q: v.q,
        kind: to,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::rational::rat;
    use crate::spectra::{density_vector_permutation, determinant_rational};

    #[test]
    fn matrix_examples() {
        let q2 = CanonicalPatternList::new(2).unwrap();
        assert_eq!(MonMatrix::new(&q2).unwrap().entries(), &[vec![1u8]]);
        let q3 = CanonicalPatternList::new(3).unwrap();
        let m = MonMatrix::new(&q3).unwrap();
        let a = q3.index_of(&"2,3,1".parse().unwrap()).unwrap();
        let b = q3.index_of(&"3,2,1".parse().unwrap()).unwrap();
        assert_eq!(m.entries()[a][b], 1);
        for q in 2..=4 {
            let m = MonMatrix::new(&CanonicalPatternList::new(q).unwrap()).unwrap();
            assert_eq!(determinant_rational(&m.as_rational()), rat(1, 1));
        }
    }

    #[test]
    fn transform_round_trip() {
        let q3 = CanonicalPatternList::new(3).unwrap();
        let m = MonMatrix::new(&q3).unwrap();
        let sigma: Permutation = "3,2,1".parse().unwrap();
        let occ = density_vector_permutation(&sigma, &q3, DensityKind::Occurrence);
        let mon = transform_vector(&occ, &m, TransformDirection::OccToMon).unwrap();
        assert_eq!(mon, density_vector_permutation(&sigma, &q3, DensityKind::Monomorphism));
        assert_eq!(mon.values[0], rat(1, 1));
        let back = transform_vector(&mon, &m, TransformDirection::MonToOcc).unwrap();
        assert_eq!(back, occ);
        let zero = DensityVector {
            q: 3,
            kind: DensityKind::Occurrence,
            values: vec![rat(0, 1); 4],
        };
        let z = transform_vector(&zero, &m, TransformDirection::OccToMon).unwrap();
        assert!(z.values.iter().all(|v| v.is_zero()));
        assert!(transform_vector(&zero, &m, TransformDirection::MonToOcc).is_err());
    }
}
