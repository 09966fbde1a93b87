use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::{density, Permutation};
use crate::permuton::Permuton;
use crate::rational::{format_rational, parse_rational, Rational};

/// Permutons `Φ_k`, `Φ'_k` that agree on every pattern of order at most
/// `low_order` (up to `matching_error`) while `t(τ_k, Φ_k) - t(τ_k, Φ'_k) = gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaWitness {
    pub gamma: Rational,
    pub phi: Permuton,
    pub phi_prime: Permuton,
    pub low_order: usize,
    pub matching_error: f64,
}

/// Truncation `Σ_{i≤K} α_i t(τ_i, ·)` of the series f•.
#[derive(Debug, Clone, PartialEq)]
pub struct FBulletParam {
    taus: Vec<Permutation>,
    alphas: Vec<Rational>,
    gammas: Vec<Option<GammaWitness>>,
}

impl FBulletParam {
    pub fn new(taus: Vec<Permutation>, alphas: Vec<Rational>, gammas: Vec<Option<GammaWitness>>) -> Result<Self> {
        let p = FBulletParam { taus, alphas, gammas };
        p.validate()?;
        Ok(p)
    }

    /// A parameter without separation witnesses.
    pub fn plain(taus: Vec<Permutation>, alphas: Vec<Rational>) -> Result<Self> {
        let n = taus.len();
        FBulletParam::new(taus, alphas, vec![None; n])
    }

    fn validate(&self) -> Result<()> {
        let k = self.taus.len();
        if k == 0 || self.alphas.len() != k || self.gammas.len() != k {
            return Err(Error::InvalidArgument(format!(
                "need equally many patterns, weights and witness slots (got {}, {}, {}), at least one",
                k,
                self.alphas.len(),
                self.gammas.len()
            )));
        }
        if let Some(w) = self.taus.windows(2).find(|w| w[0].len() >= w[1].len()) {
            return Err(Error::InvalidArgument(format!(
                "pattern orders must strictly increase: {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(a) = self.alphas.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidArgument(format!("weight {} is not positive", format_rational(a))));
        }
        let total: Rational = self.alphas.iter().sum();
        if total >= Rational::new(1.into(), 2.into()) {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {}, which is not below 1/2",
                format_rational(&total)
            )));
        }
        for (i, g) in self.gammas.iter().enumerate() {
            if let Some(g) = g {
                let bound = &self.alphas[i] * &g.gamma / Rational::from_integer(4.into());
                if self.tail_sum(i + 1) >= bound {
                    return Err(Error::InvalidArgument(format!(
                        "weights after index {} sum to {}, not below alpha*gamma/4 = {}",
                        i + 1,
                        format_rational(&self.tail_sum(i + 1)),
                        format_rational(&bound)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn taus(&self) -> &[Permutation] {
        &self.taus
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    pub fn gammas(&self) -> &[Option<GammaWitness>] {
        &self.gammas
    }

    /// `Σ_{i>k} α_i` with 1-based `k`.
    pub fn tail_sum(&self, k: usize) -> Rational {
        self.alphas.iter().skip(k).sum()
    }

    pub fn max_order(&self) -> usize {
        self.taus.last().map_or(0, Permutation::len)
    }

    /// f• given the densities `t(τ_i, ·)` in order.
    pub fn from_densities(&self, t: &[Rational]) -> Rational {
        self.alphas.iter().zip(t).map(|(a, d)| a * d).sum()
    }

    pub fn densities(&self, sigma: &Permutation) -> Vec<Rational> {
        self.taus.iter().map(|t| density(t, sigma)).collect()
    }

    /// `max_{i≤k} |t(τ_i, σ) - t(τ_i, π)|`.
    pub fn leading_gap(&self, k: usize, sigma: &Permutation, pi: &Permutation) -> Rational {
        self.taus
            .iter()
            .take(k)
            .map(|t| (density(t, sigma) - density(t, pi)).abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    /// Upper bound `δ/2 + Σ_{i>k} α_i` on `|f•(σ) - f•(π)|` for permutations
    /// whose first `k` densities differ by less than `δ`.
    pub fn approximation_bound(&self, k: usize, delta: &Rational) -> Rational {
        delta / Rational::from_integer(2.into()) + self.tail_sum(k)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "taus": self.taus.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "alphas": self.alphas.iter().map(format_rational).collect::<Vec<_>>(),
            "gammas": self.gammas.iter().map(|g| match g {
                None => Value::Null,
                Some(g) => json!({
                    "gamma": format_rational(&g.gamma),
                    "phi": g.phi.to_value(),
                    "phi_prime": g.phi_prime.to_value(),
                    "low_order": g.low_order,
                    "matching_error": g.matching_error,
                }),
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("f-bullet parameter: {what}"));
        let taus = v["taus"]
            .as_array()
            .ok_or_else(|| bad("`taus` must be an array"))?
            .iter()
            .map(|t| t.as_str().ok_or_else(|| bad("patterns must be strings"))?.parse())
            .collect::<Result<Vec<Permutation>>>()?;
        let alphas = v["alphas"]
            .as_array()
            .ok_or_else(|| bad("`alphas` must be an array"))?
            .iter()
            .map(|a| parse_rational(a.as_str().ok_or_else(|| bad("weights must be strings"))?))
            .collect::<Result<Vec<_>>>()?;
        let gammas = match v.get("gammas") {
            None | Some(Value::Null) => vec![None; taus.len()],
            Some(g) => g
                .as_array()
                .ok_or_else(|| bad("`gammas` must be an array"))?
                .iter()
                .map(|g| {
                    if g.is_null() {
                        return Ok(None);
                    }
                    Ok(Some(GammaWitness {
                        gamma: parse_rational(g["gamma"].as_str().ok_or_else(|| bad("`gamma` must be a string"))?)?,
                        phi: Permuton::from_value(&g["phi"])?,
                        phi_prime: Permuton::from_value(&g["phi_prime"])?,
                        low_order: g["low_order"].as_u64().unwrap_or(0) as usize,
                        matching_error: g["matching_error"].as_f64().unwrap_or(0.0),
                    }))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        FBulletParam::new(taus, alphas, gammas)
    }
}

/// Exact `Σ_{i≤K} α_i t(τ_i, σ)`.
pub fn f_bullet(param: &FBulletParam, sigma: &Permutation) -> Rational {
    param.from_densities(&param.densities(sigma))
}
