//! Acceptance suite. Runs every check, prints one PASS/FAIL line each, and
//! exits non-zero if any check fails.

use std::path::PathBuf;
use std::time::Instant;

use num_traits::{Signed, Zero};
use permuton_lab::params::{build_oscillating_param, f_bullet, forcing_failure_experiment};
use permuton_lab::perm::{
    count_patterns, enumerate_patterns, permutations_of_order, sample_uniform_statistics,
    CanonicalPatternList, PatternClass, PatternCounts, Permutation,
};
use permuton_lab::permuton::{density_dsum, density_stepup, marginal_deviation, pattern_frequencies, Permuton, StepUp};
use permuton_lab::rational::{factorial, int, rat, to_f64, Rational};
use permuton_lab::rng;
use permuton_lab::spectra::{
    certify_interior_point, finite_difference_jacobian, jacobian_f64, max_relative_error, transform_vector,
    DensityKind, DensityVector, MonMatrix, TransformDirection,
};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn naive_counts(tau: &Permutation, sigma: &Permutation) -> PatternCounts {
    let k = tau.len();
    let n = sigma.len();
    let t = tau.values();
    let s = sigma.values();
    let inverted = |f: &[usize]| {
        (0..k).all(|i| (i + 1..k).all(|j| t[i] < t[j] || s[f[i]] > s[f[j]]))
    };
    let induces = |f: &[usize]| {
        (0..k).all(|i| (i + 1..k).all(|j| (t[i] < t[j]) == (s[f[i]] < s[f[j]])))
    };
    let mut counts = PatternCounts { occ: 0, mon: 0, hom: 0 };
    // every map [k] -> [n] in lexicographic order
    let mut f = vec![0usize; k];
    loop {
        let non_decreasing = f.windows(2).all(|w| w[0] <= w[1]);
        let increasing = f.windows(2).all(|w| w[0] < w[1]);
        if non_decreasing && inverted(&f) {
            counts.hom += 1;
            if increasing {
                counts.mon += 1;
                if induces(&f) {
                    counts.occ += 1;
                }
            }
        }
        let mut i = k;
        loop {
            if i == 0 {
                return counts;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
        }
    }
}

fn counts_match_naive() -> Outcome {
    let texts: Vec<Permutation> = (1..=6).flat_map(permutations_of_order).collect();
    let patterns: Vec<Permutation> = (1..=4).flat_map(permutations_of_order).collect();
    let mut pairs = 0;
    for sigma in &texts {
        for tau in &patterns {
            let fast = count_patterns(tau, sigma);
            let slow = naive_counts(tau, sigma);
            if fast != slow {
                return outcome(false, format!("pattern {tau} in {sigma}: {fast:?} vs naive {slow:?}"));
            }
            pairs += 1;
        }
    }
    outcome(true, format!("{pairs} (pattern, text) pairs, texts of order <= 6, patterns of order <= 4"))
}

fn simple_fraction() -> Outcome {
    let stats = sample_uniform_statistics(200, 100_000, 2).expect("valid arguments");
    let target = (-2.0f64).exp();
    let diff = (stats.fraction_simple - target).abs();
    outcome(
        diff <= 0.01,
        format!("fraction simple at n=200 over 1e5 samples = {:.5}, e^-2 = {target:.5}, |diff| = {diff:.5} (tolerance 0.01)", stats.fraction_simple),
    )
}

fn decomposable_bound() -> Outcome {
    let n = 100.0;
    let samples = 100_000;
    let stats = sample_uniform_statistics(100, samples, 3).expect("valid arguments");
    let decomposable = 1.0 - stats.fraction_indecomposable;
    let bound = 2.0 / n + (n - 3.0) * 2.0 / (n * (n - 1.0));
    let se = (bound * (1.0 - bound) / samples as f64).sqrt();
    outcome(
        decomposable <= bound + 3.0 * se,
        format!("decomposable fraction at n=100 = {decomposable:.5}, bound {bound:.5} + 3 SE = {:.5}", bound + 3.0 * se),
    )
}

fn random_stepup(rng: &mut impl Rng) -> Permuton {
    let n = rng.random_range(2..=5);
    let mut values: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        values.swap(i, rng.random_range(0..=i));
    }
    let sigma = Permutation::new(values).expect("shuffled identity");
    let nums: Vec<i64> = (0..n).map(|_| rng.random_range(1..=6)).collect();
    let den = nums.iter().sum::<i64>() + rng.random_range(0..=4);
    Permuton::StepUp(StepUp::new(sigma, nums.iter().map(|&a| rat(a, den)).collect()).expect("valid weights"))
}

fn stepup_matches_monte_carlo() -> Outcome {
    let samples = 1_000_000u64;
    let patterns: Vec<Permutation> = enumerate_patterns(4, PatternClass::NonTrivialIndecomposable).expect("within cap");
    let mut rng = rng::seeded(4);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for i in 0..10 {
        let phi = random_stepup(&mut rng);
        let Permuton::StepUp(s) = &phi else { unreachable!() };
        for k in 2..=4 {
            let freq = pattern_frequencies(&phi, k, samples as usize, 100 + i * 10 + k as u64);
            for tau in patterns.iter().filter(|t| t.len() == k) {
                let exact = density_stepup(tau, s.sigma(), s.weights()).expect("indecomposable pattern");
                let p = to_f64(&exact);
                let hits = freq.get(tau).copied().unwrap_or(0);
                let est = hits as f64 / samples as f64;
                let se = (p * (1.0 - p) / samples as f64).sqrt();
                checks += 1;
                if se == 0.0 {
                    if est != p {
                        return outcome(false, format!("{tau} in {}: exact {p} but estimate {est}", phi.to_json_string()));
                    }
                    continue;
                }
                let z = (est - p).abs() / se;
                worst = worst.max(z);
                if z > 4.0 {
                    return outcome(false, format!("{tau} in {}: exact {p:.6}, estimate {est:.6}, {z:.2} SE", phi.to_json_string()));
                }
            }
        }
    }
    outcome(true, format!("{checks} (pattern, permuton) pairs over 10 random step-ups, 1e6 samples each, worst deviation {worst:.2} SE (limit 4)"))
}

fn mon_matrix_exact() -> Outcome {
    let mut rng = rng::seeded(5);
    for q in 2..=4 {
        let patterns = CanonicalPatternList::new(q).expect("within cap");
        let m = match MonMatrix::new(&patterns) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("q={q}: {e}")),
        };
        let e = m.entries();
        let unit_upper = (0..e.len()).all(|i| e[i][i] == 1 && (0..i).all(|j| e[i][j] == 0));
        if !unit_upper {
            return outcome(false, format!("q={q}: not unit upper triangular"));
        }
    }
    for trial in 0..100 {
        let q = 2 + trial % 3;
        let patterns = CanonicalPatternList::new(q).expect("within cap");
        let m = MonMatrix::new(&patterns).expect("certified");
        let v = DensityVector {
            q,
            kind: DensityKind::Occurrence,
            values: (0..patterns.len())
                .map(|_| rat(rng.random_range(0..1000), rng.random_range(1..1000)))
                .collect(),
        };
        let there = transform_vector(&v, &m, TransformDirection::OccToMon).expect("consistent");
        let back = transform_vector(&there, &m, TransformDirection::MonToOcc).expect("consistent");
        if back != v {
            return outcome(false, format!("round trip differs for q={q}"));
        }
    }
    outcome(true, "unit upper triangular for q in {2,3,4}; 100 random rational round trips exact")
}

fn interior_witness() -> Outcome {
    let mut notes = Vec::new();
    for q in 2..=3 {
        let start = Instant::now();
        let a = match certify_interior_point(q, 6, 1000) {
            Ok(w) => w,
            Err(e) => return outcome(false, format!("q={q}: {e}")),
        };
        let b = certify_interior_point(q, 6, 1000).expect("succeeded once");
        if a.x != b.x || a.det_jacobian != b.det_jacobian {
            return outcome(false, format!("q={q}: witness not reproducible"));
        }
        if a.det_jacobian.is_zero() {
            return outcome(false, format!("q={q}: zero Jacobian determinant"));
        }
        let r = a.system.r();
        let mut rng = rng::seeded(60 + q as u64);
        let mut worst = a.fd_relative_error;
        for _ in 0..10 {
            let x: Vec<f64> = (0..r).map(|_| rng.random_range(0.1..0.9) / r as f64).collect();
            let err = max_relative_error(&jacobian_f64(&a.system, &x).matrix, &finite_difference_jacobian(&a.system, &x, 1e-6));
            worst = worst.max(err);
        }
        if worst >= 1e-5 {
            return outcome(false, format!("q={q}: finite-difference relative error {worst:e}"));
        }
        notes.push(format!(
            "q={q}: det Jac = {:.3e} (exact, non-zero), finite-difference error {worst:.1e}, {:.2?}",
            to_f64(&a.det_jacobian),
            start.elapsed()
        ));
    }
    outcome(true, notes.join("; "))
}

fn thorough_family_formula() -> Outcome {
    let mut rng = rng::seeded(7);
    let mut checks = 0;
    for n in 2..=6 {
        let family: Vec<Permutation> = enumerate_patterns(n, PatternClass::Thorough)
            .expect("within cap")
            .into_iter()
            .filter(|p| p.len() == n && p.is_indecomposable())
            .take(4)
            .collect();
        for _ in 0..20 {
            let nums: Vec<i64> = family.iter().map(|_| rng.random_range(1..=20)).collect();
            let den = nums.iter().sum::<i64>() + rng.random_range(0..=20);
            let u: Vec<Rational> = nums.iter().map(|&a| rat(a, den)).collect();
            let parts: Vec<(Rational, Permuton)> = u
                .iter()
                .zip(&family)
                .map(|(ui, pi)| (ui.clone(), Permuton::StepUp(StepUp::balanced(pi.clone()))))
                .collect();
            for (ui, pi) in u.iter().zip(&family) {
                let got = density_dsum(pi, &parts).expect("indecomposable");
                let want = Rational::from_integer(factorial(n).into()) * num_traits::pow(ui / int(n as u64), n);
                if got != want {
                    return outcome(false, format!("{pi} at u={ui}: {got} vs {want}"));
                }
                checks += 1;
            }
        }
    }
    outcome(true, format!("{checks} exact equalities for orders 2..=6, 20 random weight vectors each"))
}

fn approximation_chain() -> Outcome {
    let param = match build_oscillating_param(2, 3, 8) {
        Ok(p) => p,
        Err(e) => return outcome(false, format!("building the parameter failed: {e}")),
    };
    let delta = rat(1, 20);
    let mut rng = rng::seeded(8);
    let sources = [
        Permuton::Uniform,
        param.gammas()[1].as_ref().expect("witness").phi.clone(),
        Permuton::step_up("2,4,1,3".parse().expect("valid"), vec![rat(1, 5); 4]).expect("valid"),
    ];
    let mut accepted = 0;
    let mut tries = 0;
    let mut tightest = f64::INFINITY;
    while accepted < 50 {
        tries += 1;
        if tries > 5000 {
            return outcome(false, "could not generate 50 close pairs");
        }
        let phi = &sources[tries % sources.len()];
        let n = rng.random_range(20..=40);
        let sigma = permuton_lab::permuton::sample_permutation(phi, n, rng.random());
        let pi = permuton_lab::permuton::sample_permutation(phi, n, rng.random());
        let k = 1 + tries % 2;
        if param.leading_gap(k, &sigma, &pi) >= delta {
            continue;
        }
        accepted += 1;
        let gap = (f_bullet(&param, &sigma) - f_bullet(&param, &pi)).abs();
        let bound = param.approximation_bound(k, &delta);
        if gap >= bound {
            return outcome(false, format!("{sigma} vs {pi}: gap {gap} not below {bound}"));
        }
        tightest = tightest.min(to_f64(&(bound - gap)));
    }
    outcome(true, format!("50 pairs with leading densities within 1/20, smallest slack {tightest:.3e}"))
}

fn separation_trend() -> Outcome {
    let param = match build_oscillating_param(2, 2, 9) {
        Ok(p) => p,
        Err(e) => return outcome(false, format!("building the parameter failed: {e}")),
    };
    let mut good = 0;
    let mut lines = Vec::new();
    for seed in 0..10 {
        let report = forcing_failure_experiment(&param, 2, &[200, 500, 1000], 900 + seed, 30).expect("valid");
        if report.separation_observed {
            good += 1;
        }
        lines.push(format!(
            "{}{}",
            if report.low_order_gap_decreasing { "d" } else { "-" },
            if report.separation_at_largest_order { "s" } else { "-" }
        ));
    }
    outcome(good >= 8, format!("{good}/10 seeds show shrinking low-order gaps with f-bullet gap above alpha*gamma/4 at n=1000 [{}]", lines.join(" ")))
}

fn corpus_marginals() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/permutons");
    let mut entries: Vec<_> = std::fs::read_dir(&dir).expect("corpus directory").filter_map(|e| e.ok()).map(|e| e.path()).collect();
    entries.sort();
    let mut worst = 0.0f64;
    for (i, path) in entries.iter().enumerate() {
        let text = std::fs::read_to_string(path).expect("readable");
        let phi = match Permuton::from_json_str(&text) {
            Ok(p) => p,
            Err(e) => return outcome(false, format!("{}: {e}", path.display())),
        };
        let (dx, dy) = marginal_deviation(&phi, 100_000, 20, 10 + i as u64);
        worst = worst.max(dx).max(dy);
        if dx >= 0.02 || dy >= 0.02 {
            return outcome(false, format!("{}: deviations {dx:.4}, {dy:.4}", path.display()));
        }
    }
    outcome(true, format!("{} corpus permutons, worst bin deviation {worst:.4} (limit 0.02)", entries.len()))
}

type Check = (&'static str, fn() -> Outcome);

fn main() {
    let checks: Vec<Check> = vec![
        ("pattern counts agree with naive enumeration", counts_match_naive),
        ("simple fraction near e^-2 at n=200", simple_fraction),
        ("decomposable fraction below the bound at n=100", decomposable_bound),
        ("exact step-up densities agree with Monte Carlo", stepup_matches_monte_carlo),
        ("monomorphism matrix unit triangular, exact round trip", mon_matrix_exact),
        ("interior point with non-singular Jacobian", interior_witness),
        ("thorough family densities in direct sums", thorough_family_formula),
        ("f-bullet approximation chain on close pairs", approximation_chain),
        ("low-order gaps shrink while f-bullet gap persists", separation_trend),
        ("corpus permutons have uniform marginals", corpus_marginals),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{:.1?}]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
    println!("all acceptance checks passed");
}
