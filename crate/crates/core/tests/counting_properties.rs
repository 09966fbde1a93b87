use permuton_lab::perm::count::backtracking;
use permuton_lab::perm::{
    count_monomorphisms, count_occurrences, count_occurrences_small, count_patterns, density, density_hom,
    dominating_patterns, permutations_of_order, Permutation,
};
use permuton_lab::rational::{binomial, rat, Rational};
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::from_zero_based(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn small_counter_matches_backtracking(tau in permutation(4), sigma in permutation(90)) {
        let fast = count_occurrences_small(tau.values(), sigma.values()).unwrap();
        prop_assert_eq!(fast, backtracking::occurrences(&tau, &sigma));
    }

    #[test]
    fn counts_form_a_chain(tau in permutation(4), sigma in permutation(12)) {
        let c = count_patterns(&tau, &sigma);
        prop_assert!(c.occ <= c.mon && c.mon <= c.hom);
        let choose = binomial(sigma.len() as u64, tau.len() as u64);
        prop_assert!(num_bigint::BigUint::from(c.mon) <= choose);
    }

    #[test]
    fn monomorphisms_split_over_dominating_patterns(tau in permutation(4), sigma in permutation(80)) {
        let total: u64 = dominating_patterns(&tau).iter().map(|p| count_occurrences(p, &sigma)).sum();
        prop_assert_eq!(total, count_monomorphisms(&tau, &sigma));
        prop_assert_eq!(total, backtracking::monomorphisms(&tau, &sigma));
    }

    #[test]
    fn densities_of_one_order_sum_to_one(sigma in permutation(9), k in 1usize..=4) {
        prop_assume!(k <= sigma.len());
        let total: Rational = permutations_of_order(k).map(|t| density(&t, &sigma)).sum();
        prop_assert_eq!(total, rat(1, 1));
    }
}

#[test]
fn large_text_uses_fast_path_consistently() {
    let n = 300;
    let values: Vec<usize> = (0..n).map(|i| (i * 37 + 11) % n).collect();
    let sigma = Permutation::from_zero_based(values).unwrap();
    for tau in permutations_of_order(4).take(6) {
        assert_eq!(count_occurrences(&tau, &sigma), backtracking::occurrences(&tau, &sigma));
    }
}

#[test]
fn homomorphism_density_with_long_pattern() {
    // non-decreasing maps of (1,2) into (1): just one, out of C(2,2) = 1
    assert_eq!(density_hom(&"1,2".parse().unwrap(), &"1".parse().unwrap()), rat(1, 1));
    assert_eq!(density(&"1,2".parse().unwrap(), &"1".parse().unwrap()), rat(0, 1));
}
