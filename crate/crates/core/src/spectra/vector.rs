use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{density, density_hom, density_mon, CanonicalPatternList, Permutation};
use crate::permuton::{density_mon_permuton, Permuton};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Occurrence,
    Monomorphism,
    Homomorphism,
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "occ" | "occurrence" => Ok(DensityKind::Occurrence),
            "mon" | "monomorphism" => Ok(DensityKind::Monomorphism),
            "hom" | "homomorphism" => Ok(DensityKind::Homomorphism),
            other => Err(Error::InvalidArgument(format!(
                "unknown density kind `{other}` (expected occ, mon or hom)"
            ))),
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::Occurrence => "occurrence",
            DensityKind::Monomorphism => "monomorphism",
            DensityKind::Homomorphism => "homomorphism",
        })
    }
}

/// Densities of the canonical patterns of order at most `q`, in list order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector {
    pub q: usize,
    pub kind: DensityKind,
    pub values: Vec<Rational>,
}

impl DensityVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(crate::rational::to_f64).collect()
    }

    pub fn to_value(&self, patterns: &CanonicalPatternList) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "kind": self.kind,
            "patterns": patterns.patterns().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "values": self.values.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

pub fn density_vector_permutation(
    sigma: &Permutation,
    patterns: &CanonicalPatternList,
    kind: DensityKind,
) -> DensityVector {
    let f = match kind {
        DensityKind::Occurrence => density,
        DensityKind::Monomorphism => density_mon,
        DensityKind::Homomorphism => density_hom,
    };
    DensityVector {
        q: patterns.q(),
        kind,
        values: patterns.patterns().iter().map(|t| f(t, sigma)).collect(),
    }
}

/// Exact density vector of a constructive permuton. Homomorphism densities
/// are defined for permutations only.
pub fn density_vector_permuton(
    phi: &Permuton,
    patterns: &CanonicalPatternList,
    kind: DensityKind,
) -> Result<DensityVector> {
    let values = match kind {
        DensityKind::Occurrence => patterns.patterns().iter().map(|t| phi.density(t)).collect(),
        DensityKind::Monomorphism => patterns
            .patterns()
            .iter()
            .map(|t| density_mon_permuton(t, phi))
            .collect::<Result<_>>()?,
        DensityKind::Homomorphism => {
            return Err(Error::InvalidArgument(
                "homomorphism densities are only defined for permutations".into(),
            ))
        }
    };
    Ok(DensityVector {
        q: patterns.q(),
        kind,
        values,
    })
}
