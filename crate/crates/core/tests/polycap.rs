mod common;

use capacity_core::polycap::{
    monomial_count, monomial_lift, poly_capacity, poly_capacity_bounds, poly_network_bounds, MonomialBasis,
};
use capacity_core::setcap::{count_threshold_functions, CountOptions};
use capacity_core::PointSet;
use common::*;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn count(s: &PointSet, d: usize) -> BigUint {
    poly_capacity(s, d, &CountOptions::default()).unwrap().exact_count.unwrap()
}

#[test]
fn degree_one_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..15 {
        let s = random_cube_subset(&mut rng, 4, 1, 12);
        assert_eq!(count(&s, 1), count_threshold_functions(&s).unwrap());
    }
}

#[test]
fn degree_saturates_on_small_cubes() {
    for n in 1..=3 {
        for d in n..=n + 1 {
            assert_eq!(count(&PointSet::cube(n), d), BigUint::from(1u32) << (1usize << n));
        }
    }
    assert_eq!(count(&PointSet::cube(2), 2), BigUint::from(16u32));
}

#[test]
fn counts_grow_with_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..8 {
        let s = random_cube_subset(&mut rng, 3, 2, 8);
        let counts: Vec<BigUint> = (1..=3).map(|d| count(&s, d)).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }
}

#[test]
fn lift_has_every_monomial_once() {
    for n in 1..=4usize {
        for d in 1..=4usize {
            let basis = MonomialBasis::new(n, d).unwrap();
            assert_eq!(BigUint::from(basis.len() + 1), monomial_count(n as u64, d as u64));
            let distinct: std::collections::BTreeSet<_> = basis.monomials.iter().collect();
            assert_eq!(distinct.len(), basis.len());
            assert!(basis.monomials.iter().all(|e| (1..=d as u32).contains(&e.iter().sum())));
        }
    }
    let lift = monomial_lift(&PointSet::cube(3), 2).unwrap();
    assert_eq!(lift.dimension(), 9);
    assert_eq!(lift.len(), 8);
}

#[test]
fn reported_bounds_hold_when_flagged_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10 {
        let s = random_cube_subset(&mut rng, 3, 2, 8);
        for d in 1..=3 {
            let r = poly_capacity(&s, d, &CountOptions::default()).unwrap();
            assert!(r.violations().is_empty(), "{:?}", r.violations());
        }
    }
    assert!(poly_capacity_bounds(&PointSet::cube(2), 0).is_err());
    let net = poly_network_bounds(4, 3, 2).unwrap();
    assert!(!net.bound("poly-network-upper").unwrap().hypotheses_hold);
    assert!(poly_network_bounds(4, 3, 1).unwrap().bound("poly-network-upper").unwrap().hypotheses_hold);
}
