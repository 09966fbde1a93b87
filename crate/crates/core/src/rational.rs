//! Exact rational helpers shared by the density code.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Rational(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator and denominator both overflow f64; scale down first
        let shift = r.denom().bits().max(r.numer().bits()) as i64 - 1000;
        let (n, d) = if shift > 0 {
            (r.numer() >> shift as usize, r.denom() >> shift as usize)
        } else {
            (r.numer().clone(), r.denom().clone())
        };
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    })
}

/// Exact binary expansion of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Arithmetic needed by the polynomial density evaluators; implemented for
/// exact rationals and for `f64`.
pub trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn from_usize(n: usize) -> Self;
    fn div_usize(self, n: usize) -> Self;
    fn is_negative(&self) -> bool;

    fn powi(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_usize(n: usize) -> Self {
        int(n as u64)
    }
    fn div_usize(self, n: usize) -> Self {
        self / int(n as u64)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn powi(&self, e: usize) -> Self {
        num_traits::pow(self.clone(), e)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn div_usize(self, n: usize) -> Self {
        self / n as f64
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn powi(&self, e: usize) -> Self {
        f64::powi(*self, e as i32)
    }
}
