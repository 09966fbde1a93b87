use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::linalg::{determinant_f64, determinant_rational};
use crate::error::{Error, Result};
use crate::perm::CanonicalPatternList;
use crate::permuton::Permuton;
use crate::rational::{format_rational, parse_rational, to_f64, Rational};
use crate::rng;

pub const DEFAULT_DET_THRESHOLD: f64 = 1e-9;

/// `r` step-up permutons whose density vectors over the canonical list are
/// linearly independent: `v[i][j] = t(τ_j, Φ_i)`.
#[derive(Debug, Clone)]
pub struct SpanningSystem {
    patterns: CanonicalPatternList,
    permutons: Vec<Permuton>,
    v: Vec<Vec<Rational>>,
    det: Rational,
}

impl SpanningSystem {
    /// Computes `V` for the given permutons and rejects singular systems.
    pub fn new(patterns: CanonicalPatternList, permutons: Vec<Permuton>) -> Result<Self> {
        if permutons.len() != patterns.len() {
            return Err(Error::InvalidArgument(format!(
                "need {} permutons, got {}",
                patterns.len(),
                permutons.len()
            )));
        }
        let v: Vec<Vec<Rational>> = permutons
            .iter()
            .map(|phi| patterns.patterns().iter().map(|t| phi.density(t)).collect())
            .collect();
        let det = determinant_rational(&v);
        if det.is_zero() {
            return Err(Error::SearchFailed("density matrix is singular".into()));
        }
        Ok(SpanningSystem {
            patterns,
            permutons,
            v,
            det,
        })
    }

    pub fn q(&self) -> usize {
        self.patterns.q()
    }

    pub fn r(&self) -> usize {
        self.patterns.len()
    }

    pub fn patterns(&self) -> &CanonicalPatternList {
        &self.patterns
    }

    pub fn permutons(&self) -> &[Permuton] {
        &self.permutons
    }

    pub fn v(&self) -> &[Vec<Rational>] {
        &self.v
    }

    pub fn v_f64(&self) -> Vec<Vec<f64>> {
        self.v.iter().map(|row| row.iter().map(to_f64).collect()).collect()
    }

    pub fn determinant(&self) -> &Rational {
        &self.det
    }

    pub fn to_value(&self) -> Value {
        json!({
            "q": self.q(),
            "patterns": self.patterns.patterns().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "permutons": self.permutons.iter().map(Permuton::to_value).collect::<Vec<_>>(),
            "v": self.v.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "det": format_rational(&self.det),
            "det_f64": to_f64(&self.det),
        })
    }

    /// Reads a system back, recomputing `V` and checking it against the
    /// stored matrix when one is present.
    pub fn from_value(v: &Value) -> Result<Self> {
        let q = v["q"]
            .as_u64()
            .ok_or_else(|| Error::InvalidArgument("spanning system needs an integer `q`".into()))?;
        let patterns = CanonicalPatternList::new(q as usize)?;
        let permutons = v["permutons"]
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("spanning system needs a `permutons` array".into()))?
            .iter()
            .map(Permuton::from_value)
            .collect::<Result<Vec<_>>>()?;
        let system = SpanningSystem::new(patterns, permutons)?;
        if let Some(rows) = v["v"].as_array() {
            for (i, row) in rows.iter().enumerate() {
                for (j, e) in row.as_array().into_iter().flatten().enumerate() {
                    let stored = parse_rational(e.as_str().unwrap_or_default())?;
                    if system.v.get(i).and_then(|r| r.get(j)) != Some(&stored) {
                        return Err(Error::InvalidArgument(format!(
                            "stored v[{i}][{j}] does not match the permutons"
                        )));
                    }
                }
            }
        }
        Ok(system)
    }
}

fn random_weights(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    let nums: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let den: i64 = nums.iter().sum::<i64>() + rng.random_range(0..=9);
    nums.into_iter().map(|a| Rational::new(a.into(), den.into())).collect()
}

/// Random step-up permutons, one on each canonical pattern, until their
/// density matrix is exactly non-singular with `|det V| > threshold` in
/// floating point; a threshold of zero keeps only the exact test. Attempts use
/// independent per-attempt streams and the first success in attempt order
/// is returned.
pub fn find_spanning_system(q: usize, seed: u64, max_attempts: usize, threshold: f64) -> Result<SpanningSystem> {
    let patterns = CanonicalPatternList::new(q)?;
    let attempt = |a: usize| -> (Option<SpanningSystem>, f64) {
        let mut rng = rng::block_rng(seed, a as u64);
        let permutons: Vec<Permuton> = patterns
            .patterns()
            .iter()
            .map(|tau| {
                Permuton::step_up(tau.clone(), random_weights(tau.len(), &mut rng))
                    .expect("weights are positive with sum at most one")
            })
            .collect();
        match SpanningSystem::new(patterns.clone(), permutons) {
            Ok(s) => {
                let d = determinant_f64(&s.v_f64()).abs();
                if d > threshold {
                    (Some(s), d)
                } else {
                    (None, d)
                }
            }
            Err(_) => (None, 0.0),
        }
    };
    let results: Vec<(Option<SpanningSystem>, f64)> = (0..max_attempts).into_par_iter().map(attempt).collect();
    let best = results.iter().map(|r| r.1).fold(0.0, f64::max);
    results
        .into_iter()
        .find_map(|r| r.0)
        .ok_or_else(|| {
            Error::SearchFailed(format!(
                "no non-singular system in {max_attempts} attempts; best |det V| = {best:e}"
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn q2_example() {
        let patterns = CanonicalPatternList::new(2).unwrap();
        let phi = Permuton::step_up("2,1".parse().unwrap(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        let s = SpanningSystem::new(patterns, vec![phi]).unwrap();
        assert_eq!(s.v(), &[vec![rat(1, 2)]]);
    }

    #[test]
    fn search_and_round_trip() {
        for q in 2..=3 {
            let s = find_spanning_system(q, 11, 64, DEFAULT_DET_THRESHOLD).unwrap();
            assert_eq!(s.r(), [1, 4][q - 2]);
            assert!(to_f64(s.determinant()).abs() > DEFAULT_DET_THRESHOLD);
            let back = SpanningSystem::from_value(&s.to_value()).unwrap();
            assert_eq!(back.v(), s.v());
        }
    }
}
