use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{enumerate_patterns_capped, PatternClass, Permutation};
use crate::permuton::{DirectSumFamily, Permuton};
use crate::rational::{factorial, Rational};
use crate::rng;

/// Target patterns `ρ_1..ρ_k` and a family `π_1..π_{k+1}` of thorough
/// indecomposable permutations of a common order `n`. For block masses `u`,
/// `Φ^u` is the direct sum of the balanced step-ups of the `π_i`, and
/// `Γ(u)` is the vector of target densities in `Φ^u`.
#[derive(Debug, Clone)]
pub struct BorsukProblem {
    n: usize,
    family: Vec<Permutation>,
    evaluator: DirectSumFamily,
}

impl BorsukProblem {
    pub fn new(targets: Vec<Permutation>, family: Vec<Permutation>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidArgument("at least one target pattern is required".into()));
        }
        if family.len() != targets.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} targets need a family of {} permutations, got {}",
                targets.len(),
                targets.len() + 1,
                family.len()
            )));
        }
        let n = family[0].len();
        for pi in &family {
            if pi.len() != n || !pi.is_thorough() || !pi.is_indecomposable() {
                return Err(Error::InvalidArgument(format!(
                    "family member {pi} must be thorough, indecomposable and of order {n}"
                )));
            }
        }
        let max_target = targets.iter().map(Permutation::len).max().unwrap_or(0);
        if n <= max_target {
            return Err(Error::InvalidArgument(format!(
                "family order {n} must exceed the largest target order {max_target}"
            )));
        }
        let children = family
            .iter()
            .map(|pi| Permuton::StepUp(crate::permuton::StepUp::balanced(pi.clone())))
            .collect();
        Ok(BorsukProblem {
            n,
            family,
            evaluator: DirectSumFamily::new(children, targets),
        })
    }

    /// Uses the first `k+1` thorough indecomposable permutations of order
    /// `n` in canonical order as the family.
    pub fn with_default_family(targets: Vec<Permutation>, n: usize) -> Result<Self> {
        let need = targets.len() + 1;
        let family: Vec<Permutation> = enumerate_patterns_capped(n, PatternClass::Thorough, n.max(8))?
            .into_iter()
            .filter(|p| p.len() == n && p.is_indecomposable())
            .take(need)
            .collect();
        if family.len() < need {
            return Err(Error::InvalidArgument(format!(
                "only {} thorough indecomposable permutations of order {n}, need {need}",
                family.len()
            )));
        }
        BorsukProblem::new(targets, family)
    }

    pub fn k(&self) -> usize {
        self.evaluator.targets().len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn targets(&self) -> &[Permutation] {
        self.evaluator.targets()
    }

    pub fn family(&self) -> &[Permutation] {
        &self.family
    }

    pub fn center(&self) -> f64 {
        1.0 / (2.0 * (self.k() + 1) as f64)
    }

    pub fn radius(&self) -> f64 {
        1.0 / (4.0 * (self.k() + 1) as f64)
    }

    pub fn gamma_f64(&self, u: &[f64]) -> Vec<f64> {
        self.evaluator.eval_f64(u)
    }

    pub fn gamma_exact(&self, u: &[Rational]) -> Vec<Rational> {
        self.evaluator.eval_exact(u)
    }

    pub fn permuton(&self, u: &[Rational]) -> Result<Permuton> {
        self.evaluator.permuton(u)
    }

    /// `n! (u_i/n)^n`: the density of `π_i` in `Φ^u`.
    pub fn family_density(&self, u_i: &Rational) -> Rational {
        let n = self.n;
        Rational::from_integer(factorial(n).into())
            * num_traits::pow(u_i / Rational::from_integer((n as u64).into()), n)
    }

    fn family_density_f64(&self, u_i: f64) -> f64 {
        let n = self.n;
        (1..=n).fold(1.0, |acc, j| acc * j as f64 * u_i / n as f64)
    }

    fn point(&self, d: &[f64], sign: f64) -> Vec<f64> {
        let (c, r) = (self.center(), self.radius());
        d.iter().map(|di| c + sign * r * di).collect()
    }

    /// `Γ(c + r d) - Γ(c - r d)` for a unit direction `d`.
    fn antipodal_gap(&self, d: &[f64]) -> Vec<f64> {
        let a = self.gamma_f64(&self.point(d, 1.0));
        let b = self.gamma_f64(&self.point(d, -1.0));
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    /// Scores a candidate pair, rejecting pairs whose points are closer than
    /// `min_separation` in every coordinate.
    pub fn evaluate_pair(&self, v: &[f64], v_prime: &[f64], min_separation: f64) -> Result<BorsukPair> {
        let m = self.k() + 1;
        if v.len() != m || v_prime.len() != m {
            return Err(Error::InvalidArgument(format!("points must have {m} coordinates")));
        }
        let separation = v.iter().zip(v_prime).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if separation < min_separation {
            return Err(Error::InvalidArgument(format!(
                "degenerate pair: separation {separation:e} is below {min_separation:e}"
            )));
        }
        let ga = self.gamma_f64(v);
        let gb = self.gamma_f64(v_prime);
        let residual = ga.iter().zip(&gb).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let (witness, _) = (0..m)
            .map(|i| (i, (self.family_density_f64(v[i]) - self.family_density_f64(v_prime[i])).abs()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let (v, v_prime) = if v[witness] >= v_prime[witness] {
            (v.to_vec(), v_prime.to_vec())
        } else {
            (v_prime.to_vec(), v.to_vec())
        };
        Ok(BorsukPair {
            witness_pattern: self.family[witness].clone(),
            witness_densities: (self.family_density_f64(v[witness]), self.family_density_f64(v_prime[witness])),
            v,
            v_prime,
            residual,
            separation,
            witness,
            converged: false,
            starts: 0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BorsukConfig {
    pub tolerance: f64,
    pub starts: usize,
    pub max_iterations: usize,
    pub min_separation: f64,
}

impl Default for BorsukConfig {
    fn default() -> Self {
        BorsukConfig {
            tolerance: 1e-8,
            starts: 32,
            max_iterations: 200,
            min_separation: 1e-6,
        }
    }
}

/// Two points of the sphere with (numerically) equal target densities. The
/// pair is oriented so that the witness pattern `π_witness` is denser in
/// `Φ^v` than in `Φ^{v'}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorsukPair {
    pub v: Vec<f64>,
    pub v_prime: Vec<f64>,
    pub residual: f64,
    pub separation: f64,
    pub witness: usize,
    pub witness_pattern: Permutation,
    pub witness_densities: (f64, f64),
    pub converged: bool,
    pub starts: usize,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let n = norm(x);
    x.iter().map(|v| v / n).collect()
}

/// Bisection of the scalar gap along a half circle starting at `theta0`.
fn bisect(problem: &BorsukProblem, theta0: f64, config: &BorsukConfig) -> Vec<f64> {
    let dir = |t: f64| vec![t.cos(), t.sin()];
    let g = |t: f64| problem.antipodal_gap(&dir(t))[0];
    let (mut lo, mut hi) = (theta0, theta0 + std::f64::consts::PI);
    let mut glo = g(lo);
    if glo == 0.0 {
        return dir(lo);
    }
    for _ in 0..config.max_iterations {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 || (hi - lo) < 1e-16 {
            return dir(mid);
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    dir(0.5 * (lo + hi))
}

/// Levenberg-Marquardt on `y ↦ G(y/|y|)` from a starting direction.
fn levenberg_marquardt(problem: &BorsukProblem, start: Vec<f64>, config: &BorsukConfig) -> (Vec<f64>, f64) {
    let m = start.len();
    let k = m - 1;
    let mut y = normalized(&start);
    let mut g = problem.antipodal_gap(&y);
    let mut cost = norm(&g);
    let mut lambda = 1e-3;
    let h = 1e-7;
    for _ in 0..config.max_iterations {
        if cost <= config.tolerance {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(k, m);
        for i in 0..m {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[i] += h;
            ym[i] -= h;
            let gp = problem.antipodal_gap(&normalized(&yp));
            let gm = problem.antipodal_gap(&normalized(&ym));
            for j in 0..k {
                jac[(j, i)] = (gp[j] - gm[j]) / (2.0 * h);
            }
        }
        let gv = DVector::from_vec(g.clone());
        let jtj = jac.transpose() * &jac;
        let jtg = jac.transpose() * gv;
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = jtj.clone();
            for i in 0..m {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let step = chol.solve(&(-&jtg));
            let candidate = normalized(&y.iter().zip(step.iter()).map(|(a, b)| a + b).collect::<Vec<_>>());
            let gc = problem.antipodal_gap(&candidate);
            let c = norm(&gc);
            if c < cost {
                y = candidate;
                g = gc;
                cost = c;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (y, cost)
}

/// Searches the sphere of radius `1/(4(k+1))` around the point with all
/// coordinates `1/(2(k+1))` for antipodal points with equal target
/// densities. Starts run in parallel with per-start random streams; the
/// first converged start in start order wins, otherwise the best pair is
/// returned with `converged = false`.
pub fn borsuk_pair_search(problem: &BorsukProblem, seed: u64, config: &BorsukConfig) -> Result<BorsukPair> {
    if config.starts == 0 {
        return Err(Error::InvalidArgument("at least one start is required".into()));
    }
    let m = problem.k() + 1;
    let run = |s: usize| -> Vec<f64> {
        let mut rng = rng::block_rng(seed, s as u64);
        if problem.k() == 1 {
            bisect(problem, rng.random_range(0.0..std::f64::consts::PI), config)
        } else {
            let start: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            levenberg_marquardt(problem, start, config).0
        }
    };
    let chunk = rayon::current_num_threads().max(1);
    let mut best: Option<BorsukPair> = None;
    let mut first = 0;
    while first < config.starts {
        let last = (first + chunk).min(config.starts);
        let dirs: Vec<Vec<f64>> = (first..last).into_par_iter().map(run).collect();
        for (offset, d) in dirs.into_iter().enumerate() {
            let pair = problem.evaluate_pair(&problem.point(&d, 1.0), &problem.point(&d, -1.0), config.min_separation)?;
            let better = best.as_ref().is_none_or(|b| pair.residual < b.residual);
            if better {
                best = Some(BorsukPair {
                    starts: first + offset + 1,
                    ..pair
                });
            }
            if best.as_ref().is_some_and(|b| b.residual <= config.tolerance) {
                let mut b = best.take().expect("set above");
                b.converged = true;
                return Ok(b);
            }
        }
        first = last;
    }
    Ok(best.expect("at least one start"))
}
