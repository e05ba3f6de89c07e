mod common;

use capacity_core::extremal::{
    brute_force_extremal, brute_force_weights, estimated_value, minimal_architecture, move_nodes_rewrite,
    optimal_architecture_nodes, quadratic_form_gap, shallow_region_bound, two_layer_optimum_value, Budget,
    Objective,
};
use capacity_core::setcap::region_count;
use capacity_core::{int, ratio, Rational};
use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn search_agrees_with_listing_every_composition() {
    for n in 2..=14 {
        let all = compositions(n);
        let best_max = all.iter().map(|c| estimated(c)).max().unwrap();
        let best_min = all.iter().map(|c| estimated(c)).min().unwrap();
        let r = brute_force_extremal(n, None, Objective::Max, 5).unwrap();
        assert_eq!(r.best.value, best_max, "N = {n}");
        assert_eq!(r.examined, all.len() as u64);
        assert!(r.ranking.windows(2).all(|w| w[0].value >= w[1].value));
        let r = brute_force_extremal(n, None, Objective::Min, 5).unwrap();
        assert_eq!(r.best.value, best_min);
    }
}

#[test]
fn moving_nodes_to_the_input_never_loses() {
    for n in 3..=15 {
        for c in compositions(n).into_iter().filter(|c| c.len() >= 3) {
            let moved = move_nodes_rewrite(&c).unwrap();
            assert_eq!(moved.iter().sum::<usize>(), n);
            assert!(estimated(&moved) >= estimated(&c), "{c:?} -> {moved:?}");
        }
    }
}

#[test]
fn two_layer_optimum_bounds_every_integer_split() {
    for n in 2..=25usize {
        let best = optimal_architecture_nodes(n).unwrap();
        let real = two_layer_optimum_value(&int(n as i64));
        assert!(Rational::from_integer(best.value.into()) <= real);
        assert_eq!(real, int(4) * int(n as i64).pow(3) / int(27));
    }
    assert_eq!(two_layer_optimum_value(&int(12)), int(256));
}

#[test]
fn minimal_architectures_under_a_weight_budget() {
    for w in 2..=20usize {
        for n1 in 1..=w.min(5) {
            let closed = minimal_architecture(Budget::Weights(w), n1).unwrap();
            let connections: usize = closed.sizes.windows(2).map(|p| p[0] * p[1]).sum();
            assert_eq!(connections, w);
            let brute = brute_force_weights(w, n1, Objective::Min).unwrap();
            assert_eq!(brute.best.value, closed.value, "W = {w}, n1 = {n1}");
        }
    }
}

#[test]
fn region_bound_counts_cells_then_assignments() {
    assert_eq!(shallow_region_bound(2, 3).regions, BigUint::from(7u32));
    for n in 1..=4u64 {
        for m in 1..=5u64 {
            let b = shallow_region_bound(n, m);
            assert_eq!(b.regions, region_count(m, n, true));
            let l = b.regions.clone();
            // 2·Σ_{k≤m} C(L−1, k), term by term.
            let mut sum = BigUint::from(0u32);
            let mut term = BigUint::from(1u32);
            for k in 0..=m {
                if BigUint::from(k) > &l - 1u32 {
                    break;
                }
                sum += &term;
                term = term * (&l - 1u32 - k) / (k + 1);
            }
            assert_eq!(b.assignment_bound, sum * 2u32);
        }
    }
}

proptest! {
    #[test]
    fn quadratic_form_holds(xs in prop::collection::vec((1i64..100, 1i64..20), 1..10)) {
        let x: Vec<Rational> = xs.iter().map(|&(p, q)| ratio(p, q)).collect();
        let gap = quadratic_form_gap(&x).unwrap();
        prop_assert!(gap.lhs >= gap.rhs);
    }

    #[test]
    fn machine_value_matches_direct_sum(sizes in prop::collection::vec(1usize..200, 2..8)) {
        prop_assert_eq!(estimated_value(&sizes), estimated(&sizes));
    }
}

#[test]
fn quadratic_form_rejects_non_positive_entries() {
    assert!(quadratic_form_gap(&[int(1), int(0)]).is_err());
    assert!(quadratic_form_gap(&[int(-1)]).is_err());
}
