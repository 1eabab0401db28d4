use chromrate_core::graphs::{
    chromatic_number, count_proper_equipartitions, independence_number, sample_gnp, Graph,
};
use chromrate_core::oracle;
use num_bigint::BigUint;

#[test]
fn chromatic_number_matches_exhaustive_search() {
    for i in 0..200u64 {
        let n = 1 + (i % 9) as usize;
        let p = [0.2, 0.5, 0.8][(i % 3) as usize];
        let g = sample_gnp(n, p, 1000 + i).unwrap();
        assert_eq!(chromatic_number(&g).unwrap(), oracle::brute_chromatic_number(&g).unwrap(), "{g:?}");
    }
}

#[test]
fn independence_number_matches_exhaustive_search() {
    for i in 0..200u64 {
        let n = 1 + (i % 16) as usize;
        let p = [0.2, 0.5, 0.8][(i % 3) as usize];
        let g = sample_gnp(n, p, 5000 + i).unwrap();
        assert_eq!(independence_number(&g).unwrap(), oracle::brute_independence_number(&g).unwrap(), "{g:?}");
    }
}

#[test]
fn equipartition_count_on_empty_graph() {
    use chromrate_core::moments::{equipartition_count, EquipartitionShape};
    for n in 1..=8u64 {
        for k in 1..=n {
            let shape = EquipartitionShape::new(n, k).unwrap();
            assert_eq!(count_proper_equipartitions(&Graph::empty(n as usize), k as usize).unwrap(), equipartition_count(&shape));
        }
    }
    assert_eq!(count_proper_equipartitions(&Graph::complete(5), 2).unwrap(), BigUint::from(0u32));
}

#[test]
fn chromatic_bounds_hold_at_n_40() {
    for seed in 0..10 {
        let g = sample_gnp(40, 0.5, seed).unwrap();
        let chi = chromatic_number(&g).unwrap();
        let alpha = independence_number(&g).unwrap();
        assert!(chi * alpha >= 40);
    }
}
