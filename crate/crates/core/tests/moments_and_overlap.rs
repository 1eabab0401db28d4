use chromrate_core::moments::{first_moment_exact, half, EquipartitionShape};
use chromrate_core::oracle;
use chromrate_core::overlap::{second_moment_exact, second_moment_exact_rational};
use proptest::prelude::*;

#[test]
fn first_moment_equals_all_graphs_average() {
    for n in 4..=6u64 {
        for k in 1..=n {
            let shape = EquipartitionShape::new(n, k).unwrap();
            let (avg, _) = oracle::all_graphs_equipartition_moments(n as usize, k as usize, &half()).unwrap();
            assert_eq!(avg, first_moment_exact(&shape, &half()), "n={n} k={k}");
        }
    }
}

#[test]
fn second_moment_equals_all_graphs_average() {
    for (n, k) in [(4u64, 2u64), (5, 2), (5, 3), (6, 3)] {
        let (_, brute) = oracle::all_graphs_equipartition_moments(n as usize, k as usize, &half()).unwrap();
        assert_eq!(second_moment_exact_rational(n, k, &half()).unwrap(), brute, "n={n} k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn second_moment_dominates_squared_first(p in 0.001f64..0.999, case in 0usize..5) {
        let (n, k) = [(4u64, 2u64), (5, 2), (6, 2), (6, 3), (5, 3)][case];
        let sm = second_moment_exact(n, k, p).unwrap();
        prop_assert!(sm.ratio.ln() >= -1e-12);
        prop_assert!(sm.relative_gap < 5e-13);
    }
}
