mod common;

use grothmodt::config::incidence_configuration;
use grothmodt::field::Fp;
use grothmodt::oracle::{check_stratification_counts, count_points, count_points_poly, crt_reconstruct, projective_size, Exec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_partition_projective_space(g in common::multigraph(5, 8), pi in 0..3usize) {
        let p = [3u32, 5, 7][pi];
        let w = incidence_configuration(&g);
        prop_assume!(p == 3 || w.size() <= 7);
        let c = count_points(&w, p, u64::MAX, Exec::Sequential).unwrap();
        prop_assert_eq!((c.n_x + c.n_y) as u128, projective_size(p, w.size()));
        prop_assert!(c.n_ytorus <= c.n_y);
    }

    #[test]
    fn parallel_and_sequential_agree(g in common::multigraph(5, 9)) {
        let w = incidence_configuration(&g);
        let a = count_points(&w, 3, u64::MAX, Exec::Sequential).unwrap();
        let b = count_points(&w, 3, u64::MAX, Exec::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn laplacian_and_monomial_paths_agree(g in common::multigraph(5, 7)) {
        let w = incidence_configuration(&g);
        let poly = w.polynomial().unwrap();
        let a = count_points(&w, 3, u64::MAX, Exec::Sequential).unwrap();
        let b = count_points_poly(&poly, 3, u64::MAX, Exec::Sequential).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pointwise_laplacian_matches_polynomial(g in common::multigraph(5, 8), xs in proptest::collection::vec(0u32..7, 8)) {
        let w = incidence_configuration(&g);
        let f = Fp::new(7).unwrap();
        let x: Vec<u32> = (0..w.size()).map(|i| xs[i % xs.len()]).collect();
        let poly = w.polynomial().unwrap();
        let mut scratch = Vec::new();
        prop_assert_eq!(w.gram_form(&f).evaluate(&x, &mut scratch), poly.evaluate_mod_p(&x, &f));
        prop_assert_eq!(grothmodt::config::evaluate_graph_via_laplacian(&g, &x, &f), poly.evaluate_mod_p(&x, &f));
    }

    #[test]
    fn stratification_and_cremona_hold_exactly(g in common::multigraph(5, 7)) {
        let w = incidence_configuration(&g);
        prop_assume!(w.rank() > 0);
        let r = check_stratification_counts(&w, 3, u64::MAX).unwrap();
        prop_assert_eq!(r.n_y, r.torus_sum);
        prop_assert_eq!(r.n_ytorus, r.n_ytorus_dual);
    }

    #[test]
    fn crt_recovers_small_integers(n in -29i64..=29) {
        let residues: Vec<(u64, i64)> = [2u64, 4, 6, 10, 12].iter().map(|&m| (m, n.rem_euclid(m as i64))).collect();
        prop_assert_eq!(crt_reconstruct(&residues, 29).unwrap(), Some(n));
    }
}
