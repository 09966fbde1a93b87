use permuton_lab::perm::CanonicalPatternList;
use permuton_lab::rational::{int, rat, to_f64, Rational};
use permuton_lab::rng;
use permuton_lab::spectra::{
    borsuk_pair_search, density_vector_permuton, find_spanning_system, finite_difference_jacobian, jacobian_exact,
    jacobian_f64, max_relative_error, psi_map, BorsukConfig, BorsukProblem, DensityKind, SpanningSystem,
    DEFAULT_DET_THRESHOLD,
};
use permuton_lab::Permuton;
use rand::Rng;

fn interior_point(r: usize, rng: &mut impl Rng) -> Vec<Rational> {
    (0..r).map(|_| Rational::new(rng.random_range(1..100).into(), (100 * r as i64).into())).collect()
}

#[test]
fn psi_equals_direct_sum_density_vector() {
    for q in 2..=3 {
        let system = find_spanning_system(q, 21, 64, DEFAULT_DET_THRESHOLD).unwrap();
        let mut rng = rng::seeded(q as u64);
        for _ in 0..20 {
            let x = interior_point(system.r(), &mut rng);
            let psi = psi_map(&system, &x).unwrap();
            let parts = x.iter().cloned().zip(system.permutons().iter().cloned()).collect();
            let phi = Permuton::direct_sum(parts).unwrap();
            let direct = density_vector_permuton(&phi, system.patterns(), DensityKind::Occurrence).unwrap();
            assert_eq!(psi.values, direct.values);
        }
    }
}

#[test]
fn swapping_identical_permutons_keeps_psi() {
    let patterns = CanonicalPatternList::new(3).unwrap();
    let base = find_spanning_system(3, 4, 64, DEFAULT_DET_THRESHOLD).unwrap();
    let mut permutons = base.permutons().to_vec();
    permutons.swap(0, 1);
    let swapped = SpanningSystem::new(patterns, permutons).unwrap();
    let x = vec![rat(1, 10); 4];
    assert_eq!(psi_map(&base, &x).unwrap(), psi_map(&swapped, &x).unwrap());
}

#[test]
fn jacobian_matches_finite_differences_and_ones_identity() {
    for q in 2..=3 {
        let system = find_spanning_system(q, 8, 64, DEFAULT_DET_THRESHOLD).unwrap();
        let r = system.r();
        let mut rng = rng::seeded(80 + q as u64);
        for _ in 0..10 {
            let x: Vec<f64> = (0..r).map(|_| rng.random_range(0.05..0.95) / r as f64).collect();
            let err = max_relative_error(&jacobian_f64(&system, &x).matrix, &finite_difference_jacobian(&system, &x, 1e-6));
            assert!(err < 1e-5, "q={q}: {err}");
        }
        let prod: u64 = system.patterns().patterns().iter().map(|t| t.len() as u64).product();
        let ones = vec![rat(1, 1); r];
        assert_eq!(jacobian_exact(&system, &ones).determinant, int(prod) * system.determinant());
    }
}

#[test]
fn spanning_system_for_order_four() {
    let system = find_spanning_system(4, 2, 64, DEFAULT_DET_THRESHOLD);
    match system {
        Ok(s) => assert!(to_f64(s.determinant()).abs() > DEFAULT_DET_THRESHOLD),
        Err(e) => assert!(e.to_string().contains("best |det V|"), "{e}"),
    }
}

#[test]
fn borsuk_pairs_separate_the_witness() {
    let targets = vec!["2,1".parse().unwrap(), "1,3,2".parse().unwrap()];
    let problem = BorsukProblem::with_default_family(targets, 4).unwrap();
    let pair = borsuk_pair_search(&problem, 17, &BorsukConfig::default()).unwrap();
    assert!(pair.converged);
    let ga = problem.gamma_f64(&pair.v);
    let gb = problem.gamma_f64(&pair.v_prime);
    for (a, b) in ga.iter().zip(&gb) {
        assert!((a - b).abs() <= 1e-8);
    }
    for i in 0..pair.v.len() {
        if (pair.v[i] - pair.v_prime[i]).abs() > 1e-12 {
            let n = problem.n() as f64;
            let f = |u: f64| (1..=problem.n()).fold(1.0, |acc, j| acc * j as f64 * u / n);
            assert_ne!(f(pair.v[i]), f(pair.v_prime[i]));
        }
    }
    let again = borsuk_pair_search(&problem, 17, &BorsukConfig::default()).unwrap();
    assert_eq!(pair, again);
}
