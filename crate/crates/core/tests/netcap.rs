mod common;

use capacity_core::netcap::{
    enumerate_network_functions, estimated_capacity, exact_network_capacity, NetBudget,
};
use capacity_core::setcap::count_threshold_functions;
use capacity_core::{Architecture, CapacityError, PointSet};
use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn wide() -> NetBudget {
    NetBudget {
        max_layer_functions: 1 << 20,
        max_depth: 8,
        max_points: 16,
        jobs: 0,
    }
}

fn enumerate(sizes: &[usize], s: &PointSet) -> Vec<Vec<u64>> {
    let arch = Architecture::new(sizes.to_vec()).unwrap();
    enumerate_network_functions(&arch, s, &wide()).unwrap().functions
}

#[test]
fn enumerator_matches_naive_composition_on_cubes() {
    for sizes in [
        vec![1, 1],
        vec![2, 1],
        vec![2, 2],
        vec![1, 2, 1],
        vec![2, 1, 1],
        vec![2, 1, 2],
        vec![2, 2, 1],
        vec![1, 3, 1],
        vec![3, 1, 1],
        vec![2, 1, 1, 1],
    ] {
        let n = sizes[0];
        let codes: Vec<u64> = (0..1u64 << n).collect();
        let naive: Vec<Vec<u64>> = naive_network_functions(&sizes, &codes).into_iter().collect();
        assert_eq!(enumerate(&sizes, &PointSet::cube(n)), naive, "{sizes:?}");
    }
}

#[test]
fn enumerator_matches_naive_composition_on_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..12 {
        let s = random_cube_subset(&mut rng, 3, 2, 6);
        for sizes in [vec![3, 1], vec![3, 1, 1], vec![3, 2, 1]] {
            let naive: Vec<Vec<u64>> = naive_network_functions(&sizes, &s.codes().unwrap()).into_iter().collect();
            assert_eq!(enumerate(&sizes, &s), naive, "{sizes:?} on {:?}", s.codes());
        }
    }
}

#[test]
fn parallel_units_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..8 {
        let s = random_cube_subset(&mut rng, 3, 2, 5);
        let base = count_threshold_functions(&s).unwrap();
        for m in 1..=3 {
            let got = enumerate(&[3, m], &s).len();
            assert_eq!(BigUint::from(got), base.pow(m as u32));
        }
    }
}

#[test]
fn image_replacement_never_gains() {
    // C(f(S), n2, …) ≤ C(S, n1, n2, …) for any first-layer map f.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let f = random_map(&mut rng, 3, 2);
        let image: std::collections::BTreeSet<u64> = (0..8u64)
            .map(|c| {
                let bits: Vec<bool> = (0..3).map(|j| c >> (2 - j) & 1 == 1).collect();
                f.eval_bits(&bits).unwrap().iter().fold(0, |a, &b| (a << 1) | u64::from(b))
            })
            .collect();
        let image = PointSet::from_codes(2, &image.into_iter().collect::<Vec<_>>()).unwrap();
        let from_image = enumerate(&[2, 1, 1], &image).len();
        let from_cube = enumerate(&[3, 2, 1, 1], &PointSet::cube(3)).len();
        assert!(from_image <= from_cube);
    }
}

#[test]
fn budgets_are_reported_by_name() {
    let arch = Architecture::new(vec![2, 3]).unwrap();
    let err = enumerate_network_functions(&arch, &PointSet::cube(2), &NetBudget::default()).unwrap_err();
    assert!(matches!(err, CapacityError::BudgetExceeded { name: "max_layer_functions", .. }), "{err}");
    let deep = Architecture::new(vec![1; 6]).unwrap();
    let err = enumerate_network_functions(&deep, &PointSet::cube(1), &NetBudget::default()).unwrap_err();
    assert!(matches!(err, CapacityError::BudgetExceeded { name: "max_depth", .. }), "{err}");
    let mut b = NetBudget::default();
    assert!(b.set("max_points", 8).is_ok());
    assert!(b.set("bogus", 1).is_err());
}

#[test]
fn exact_reports_respect_their_bounds() {
    for sizes in [vec![2, 1], vec![2, 2], vec![3, 1], vec![2, 2, 1], vec![2, 1, 1], vec![3, 2, 1]] {
        let r = exact_network_capacity(&Architecture::new(sizes.clone()).unwrap(), &wide()).unwrap();
        assert!(r.violations().is_empty(), "{sizes:?}: {:?}", r.violations());
    }
}

proptest! {
    #[test]
    fn estimated_capacity_matches_direct_sum(sizes in prop::collection::vec(1usize..40, 2..7)) {
        let e = estimated_capacity(&sizes);
        prop_assert_eq!(e.value.clone(), BigUint::from(estimated(&sizes)));
        prop_assert_eq!(e.terms.iter().sum::<BigUint>(), e.value);
        prop_assert_eq!(e.terms.len(), sizes.len() - 1);
    }
}
