use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use super::linalg::{determinant_f64, determinant_rational};
use super::spanning::{find_spanning_system, SpanningSystem};
use super::vector::{DensityKind, DensityVector};
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational, Scalar};
use crate::rng;

/// `Ψ_j(x) = Σ_i x_i^{|τ_j|} v[i][j]`, evaluated anywhere.
pub fn psi_eval<T: Scalar>(system: &SpanningSystem, x: &[T]) -> Vec<T> {
    let patterns = system.patterns().patterns();
    (0..system.r())
        .map(|j| {
            let k = patterns[j].len();
            x.iter().zip(system.v()).fold(T::zero(), |acc, (xi, row)| {
                acc + xi.powi(k) * T::from_rational(&row[j])
            })
        })
        .collect()
}

fn check_box(system: &SpanningSystem, x: &[Rational]) -> Result<()> {
    let r = system.r();
    if x.len() != r {
        return Err(Error::InvalidArgument(format!("x has {} coordinates, expected {r}", x.len())));
    }
    let upper = Rational::new(1.into(), (r as u64).into());
    if let Some((i, xi)) = x.iter().enumerate().find(|(_, xi)| !xi.is_positive() || **xi >= upper) {
        return Err(Error::InvalidArgument(format!(
            "x[{i}] = {} lies outside the open interval (0, 1/{r})",
            format_rational(xi)
        )));
    }
    Ok(())
}

/// Density vector of `⊕(x_i, Φ_i)` for `x` inside the open box `(0, 1/r)^r`.
pub fn psi_map(system: &SpanningSystem, x: &[Rational]) -> Result<DensityVector> {
    check_box(system, x)?;
    Ok(DensityVector {
        q: system.q(),
        kind: DensityKind::Occurrence,
        values: psi_eval(system, x),
    })
}

/// `matrix[j][i] = ∂Ψ_j/∂x_i = |τ_j| x_i^{|τ_j|-1} v[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian<T> {
    pub matrix: Vec<Vec<T>>,
    pub determinant: T,
}

fn jacobian_matrix<T: Scalar>(system: &SpanningSystem, x: &[T]) -> Vec<Vec<T>> {
    let patterns = system.patterns().patterns();
    (0..system.r())
        .map(|j| {
            let k = patterns[j].len();
            x.iter()
                .zip(system.v())
                .map(|(xi, row)| xi.powi(k - 1) * T::from_rational(&row[j]) * T::from_usize(k))
                .collect()
        })
        .collect()
}

pub fn jacobian_exact(system: &SpanningSystem, x: &[Rational]) -> Jacobian<Rational> {
    let matrix = jacobian_matrix(system, x);
    let determinant = determinant_rational(&matrix);
    Jacobian { matrix, determinant }
}

pub fn jacobian_f64(system: &SpanningSystem, x: &[f64]) -> Jacobian<f64> {
    let matrix = jacobian_matrix(system, x);
    let determinant = determinant_f64(&matrix);
    Jacobian { matrix, determinant }
}

/// Central differences of `Ψ` with step `h`, laid out like [`Jacobian`].
pub fn finite_difference_jacobian(system: &SpanningSystem, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let r = system.r();
    let mut out = vec![vec![0.0; r]; r];
    for i in 0..r {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let fp = psi_eval(system, &plus);
        let fm = psi_eval(system, &minus);
        for j in 0..r {
            out[j][i] = (fp[j] - fm[j]) / (2.0 * h);
        }
    }
    out
}

/// Largest entrywise `|a - b| / |a|`, counting `0` against `0` as exact.
pub fn max_relative_error(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(&x, &y)| {
            if x == y {
                0.0
            } else if x == 0.0 {
                f64::INFINITY
            } else {
                ((x - y) / x).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// A point of the open box where `Ψ` has a non-singular Jacobian, certified
/// by an exact determinant.
#[derive(Debug, Clone)]
pub struct InteriorWitness {
    pub system: SpanningSystem,
    pub x: Vec<Rational>,
    pub w: DensityVector,
    pub det_jacobian: Rational,
    pub draws: usize,
    pub fd_relative_error: f64,
}

impl InteriorWitness {
    pub fn to_value(&self) -> Value {
        json!({
            "q": self.system.q(),
            "system": self.system.to_value(),
            "x": self.x.iter().map(format_rational).collect::<Vec<_>>(),
            "w": self.w.values.iter().map(format_rational).collect::<Vec<_>>(),
            "det_jacobian": format_rational(&self.det_jacobian),
            "det_jacobian_f64": to_f64(&self.det_jacobian),
            "draws": self.draws,
            "fd_max_relative_error": self.fd_relative_error,
        })
    }
}

const GRID: u64 = 64;
pub const FD_STEP: f64 = 1e-6;

/// Certification is exact, so the spanning system only needs an exactly
/// non-zero `det V`.
pub fn certify_interior_point(q: usize, seed: u64, budget: usize) -> Result<InteriorWitness> {
    let system = find_spanning_system(q, seed, 256, 0.0)?;
    let r = system.r();
    let mut rng = rng::block_rng(seed, u64::MAX);
    for draw in 1..=budget {
        let x: Vec<Rational> = (0..r)
            .map(|_| Rational::new(rng.random_range(1..GRID).into(), (GRID * r as u64).into()))
            .collect();
        let jac = jacobian_exact(&system, &x);
        if jac.determinant.is_zero() {
            continue;
        }
        let w = psi_map(&system, &x)?;
        let xf: Vec<f64> = x.iter().map(to_f64).collect();
        let fd = finite_difference_jacobian(&system, &xf, FD_STEP);
        let fd_relative_error = max_relative_error(&jacobian_f64(&system, &xf).matrix, &fd);
        return Ok(InteriorWitness {
            system,
            x,
            w,
            det_jacobian: jac.determinant,
            draws: draw,
            fd_relative_error,
        });
    }
    Err(Error::SearchFailed(format!(
        "no point with non-singular Jacobian in {budget} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::CanonicalPatternList;
    use crate::permuton::Permuton;
    use crate::rational::{int, rat};
    use crate::spectra::DEFAULT_DET_THRESHOLD;

    fn q2_system() -> SpanningSystem {
        let phi = Permuton::step_up("2,1".parse().unwrap(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        SpanningSystem::new(CanonicalPatternList::new(2).unwrap(), vec![phi]).unwrap()
    }

    #[test]
    fn q2_examples() {
        let s = q2_system();
        assert_eq!(psi_map(&s, &[rat(1, 4)]).unwrap().values, vec![rat(1, 32)]);
        assert!(psi_map(&s, &[rat(1, 1)]).is_err());
        assert!(psi_map(&s, &[rat(0, 1)]).is_err());
        let j = jacobian_exact(&s, &[rat(1, 3)]);
        assert_eq!(j.determinant, rat(2, 1) * rat(1, 3) * rat(1, 2));
    }

    #[test]
    fn jacobian_at_ones() {
        let s = find_spanning_system(3, 5, 64, DEFAULT_DET_THRESHOLD).unwrap();
        let ones = vec![rat(1, 1); s.r()];
        let prod: u64 = s.patterns().patterns().iter().map(|t| t.len() as u64).product();
        assert_eq!(jacobian_exact(&s, &ones).determinant, int(prod) * s.determinant());
    }

    #[test]
    fn witness_is_reproducible() {
        let a = certify_interior_point(3, 9, 1000).unwrap();
        let b = certify_interior_point(3, 9, 1000).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.det_jacobian, b.det_jacobian);
        assert!(a.fd_relative_error < 1e-5);
        assert!(a.w.values.iter().all(|v| v.is_positive() && *v < rat(1, 1)));
    }
}
