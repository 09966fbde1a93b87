use num_traits::Signed;
use permuton_lab::params::{
    build_oscillating_param, estimate_by_subsampling, f_bullet, FBulletParam, TesterConfig,
};
use permuton_lab::perm::Permutation;
use permuton_lab::permuton::{sample_permutation, Permuton};
use permuton_lab::rational::{rat, to_f64, Rational};

#[test]
fn built_parameters_satisfy_both_weight_invariants() {
    for k in 1..=3 {
        let param = build_oscillating_param(2, k, 4).unwrap();
        let total: Rational = param.alphas().iter().sum();
        assert!(total < rat(1, 2));
        for (i, g) in param.gammas().iter().enumerate() {
            let g = g.as_ref().unwrap();
            assert!(g.gamma.is_positive());
            assert!(param.tail_sum(i + 1) < &param.alphas()[i] * &g.gamma / rat(4, 1));
            assert!(g.matching_error <= 1e-6);
        }
        let json = param.to_value();
        assert_eq!(FBulletParam::from_value(&json).unwrap(), param);
    }
}

#[test]
fn f_bullet_is_lipschitz_in_each_density() {
    let param = build_oscillating_param(2, 2, 1).unwrap();
    let sigma = sample_permutation(&Permuton::Uniform, 30, 3);
    let t = param.densities(&sigma);
    let base = param.from_densities(&t);
    for i in 0..t.len() {
        let delta = rat(1, 37);
        let mut moved = t.clone();
        moved[i] += &delta;
        let change = (param.from_densities(&moved) - &base).abs();
        assert!(change <= &param.alphas()[i] * &delta);
    }
    assert!(f_bullet(&param, &sigma) < rat(1, 2));
}

#[test]
fn subsampling_concentrates_on_long_uniform_permutation() {
    let param = FBulletParam::plain(vec!["2,1".parse().unwrap()], vec![rat(1, 4)]).unwrap();
    let sigma = sample_permutation(&Permuton::Uniform, 2000, 5);
    let cfg = TesterConfig { epsilon: 0.05, n0: 100, samples: 2000, seed: 6 };
    let est = estimate_by_subsampling(&param, &sigma, &cfg).unwrap();
    assert!(est.empirical_error_rate < 0.05, "{est:?}");
    assert!((est.estimate - est.target).abs() < 4.0 * est.std_error + 1e-3);
}

#[test]
fn error_rate_falls_with_subsample_order() {
    let param = FBulletParam::plain(vec!["2,1".parse().unwrap()], vec![rat(1, 4)]).unwrap();
    let orders = [20, 50, 100];
    let mut rates = [0.0; 3];
    for seed in 0..5 {
        let sigma: Permutation = sample_permutation(&Permuton::Uniform, 1000, 40 + seed);
        for (i, &n0) in orders.iter().enumerate() {
            let cfg = TesterConfig { epsilon: 0.02, n0, samples: 500, seed };
            rates[i] += estimate_by_subsampling(&param, &sigma, &cfg).unwrap().empirical_error_rate;
        }
    }
    assert!(rates[0] >= rates[1] && rates[1] >= rates[2], "{rates:?}");
}

#[test]
fn approximation_bound_holds_for_truncations() {
    let param = build_oscillating_param(2, 2, 2).unwrap();
    let a = sample_permutation(&Permuton::Uniform, 25, 1);
    let b = sample_permutation(&Permuton::Uniform, 25, 2);
    let delta = param.leading_gap(1, &a, &b) + rat(1, 1000);
    let gap = (f_bullet(&param, &a) - f_bullet(&param, &b)).abs();
    assert!(gap < param.approximation_bound(1, &delta), "{}", to_f64(&gap));
}
