//! Constructive permutons: step-up permutons, weighted direct sums, and the
//! uniform, identity and reverse permutons.

pub(crate) mod density;
mod json;
mod sample;

pub use density::{
    density_dsum, density_mc, density_mon_mc, density_mon_permuton, density_stepup, pattern_frequencies, DirectSumFamily,
    McEstimate,
};
pub use sample::{marginal_deviation, sample_permutation, PointSampler};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{format_rational, Rational};

/// Deepest allowed nesting of direct sums.
pub const MAX_DEPTH: usize = 16;

/// Step-up permuton: increasing diagonal segments laid out like `sigma`,
/// segment `i` of mass `weights[i]`, followed by a diagonal tail of mass
/// `1 - sum(weights)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepUp {
    sigma: Permutation,
    weights: Vec<Rational>,
}

impl StepUp {
    pub fn new(sigma: Permutation, weights: Vec<Rational>) -> Result<Self> {
        check_weights(&weights, "$.weights")?;
        if weights.len() != sigma.len() {
            return Err(Error::permuton(
                "$.weights",
                format!("expected {} weights, got {}", sigma.len(), weights.len()),
            ));
        }
        Ok(StepUp { sigma, weights })
    }

    /// Equal weights `1/n` on every segment, no tail.
    pub fn balanced(sigma: Permutation) -> Self {
        let n = sigma.len();
        let w = Rational::new(1.into(), (n as i64).into());
        StepUp {
            sigma,
            weights: vec![w; n],
        }
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn tail(&self) -> Rational {
        Rational::one() - self.weights.iter().sum::<Rational>()
    }
}

/// Weighted direct sum; leftover mass is an identity block in the top
/// right corner.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSum {
    parts: Vec<(Rational, Permuton)>,
}

impl DirectSum {
    pub fn new(parts: Vec<(Rational, Permuton)>) -> Result<Self> {
        let weights: Vec<Rational> = parts.iter().map(|(w, _)| w.clone()).collect();
        check_weights(&weights, "$.parts")?;
        let d = DirectSum { parts };
        Permuton::DirectSum(d.clone()).validate()?;
        Ok(d)
    }

    pub fn parts(&self) -> &[(Rational, Permuton)] {
        &self.parts
    }

    pub fn tail(&self) -> Rational {
        Rational::one() - self.parts.iter().map(|(w, _)| w).sum::<Rational>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Permuton {
    StepUp(StepUp),
    DirectSum(DirectSum),
    Uniform,
    Identity,
    Reverse,
}

fn check_weights(weights: &[Rational], path: &str) -> Result<()> {
    for (i, w) in weights.iter().enumerate() {
        if !w.is_positive() {
            return Err(Error::permuton(
                &format!("{path}[{i}]"),
                format!("weight {} is not positive", format_rational(w)),
            ));
        }
    }
    let total: Rational = weights.iter().sum();
    if total > Rational::one() {
        return Err(Error::permuton(
            path,
            format!("weights sum to {} > 1", format_rational(&total)),
        ));
    }
    Ok(())
}

impl Permuton {
    pub fn step_up(sigma: Permutation, weights: Vec<Rational>) -> Result<Self> {
        StepUp::new(sigma, weights).map(Permuton::StepUp)
    }

    pub fn direct_sum(parts: Vec<(Rational, Permuton)>) -> Result<Self> {
        DirectSum::new(parts).map(Permuton::DirectSum)
    }

    /// Checks weight and depth invariants of the whole tree.
    pub fn validate(&self) -> Result<()> {
        self.validate_at("$", 0)
    }

    fn validate_at(&self, path: &str, depth: usize) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(Error::permuton(path, format!("nesting deeper than {MAX_DEPTH}")));
        }
        match self {
            Permuton::StepUp(s) => {
                check_weights(&s.weights, &format!("{path}.weights"))?;
                if s.weights.len() != s.sigma.len() {
                    return Err(Error::permuton(
                        &format!("{path}.weights"),
                        format!("expected {} weights, got {}", s.sigma.len(), s.weights.len()),
                    ));
                }
            }
            Permuton::DirectSum(d) => {
                let ws: Vec<Rational> = d.parts.iter().map(|(w, _)| w.clone()).collect();
                check_weights(&ws, &format!("{path}.parts"))?;
                for (i, (_, child)) in d.parts.iter().enumerate() {
                    child.validate_at(&format!("{path}.parts[{i}].permuton"), depth + 1)?;
                }
            }
            Permuton::Uniform | Permuton::Identity | Permuton::Reverse => {}
        }
        Ok(())
    }

    /// Nesting depth; leaves have depth zero.
    pub fn depth(&self) -> usize {
        match self {
            Permuton::DirectSum(d) => 1 + d.parts.iter().map(|(_, p)| p.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Permuton::StepUp(_) => "stepup",
            Permuton::DirectSum(_) => "dsum",
            Permuton::Uniform => "uniform",
            Permuton::Identity => "identity",
            Permuton::Reverse => "reverse",
        }
    }

    /// Leftover mass carried by the implicit diagonal tail, if any.
    pub fn tail_mass(&self) -> Rational {
        match self {
            Permuton::StepUp(s) => s.tail(),
            Permuton::DirectSum(d) => d.tail(),
            _ => Rational::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn weight_invariants() {
        assert!(Permuton::step_up(p("2,1"), vec![rat(1, 2), rat(1, 2)]).is_ok());
        assert!(Permuton::step_up(p("2,1"), vec![rat(2, 3), rat(1, 2)]).is_err());
        assert!(Permuton::step_up(p("2,1"), vec![rat(0, 1), rat(1, 2)]).is_err());
        assert!(Permuton::step_up(p("2,1"), vec![rat(1, 2)]).is_err());
        let inner = Permuton::Uniform;
        assert!(Permuton::direct_sum(vec![(rat(1, 2), inner.clone()), (rat(1, 3), inner.clone())]).is_ok());
        let err = Permuton::direct_sum(vec![(rat(3, 4), inner.clone()), (rat(1, 2), inner)]).unwrap_err();
        assert!(matches!(err, Error::Permuton { ref path, .. } if path == "$.parts"));
    }

    #[test]
    fn nesting_is_capped() {
        let mut phi = Permuton::Reverse;
        for _ in 0..MAX_DEPTH {
            phi = Permuton::direct_sum(vec![(rat(1, 2), phi)]).unwrap();
        }
        assert_eq!(phi.depth(), MAX_DEPTH);
        let err = Permuton::direct_sum(vec![(rat(1, 2), phi)]).unwrap_err();
        assert!(err.to_string().contains("nesting"));
    }

    #[test]
    fn tails() {
        let s = StepUp::new(p("2,4,3,1"), vec![rat(1, 6), rat(1, 4), rat(1, 12), rat(1, 4)]).unwrap();
        assert_eq!(s.tail(), rat(1, 4));
        assert_eq!(StepUp::balanced(p("2,1")).tail(), rat(0, 1));
    }
}
