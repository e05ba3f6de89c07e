//! Independent oracles shared by the integration tests. None of these go
//! through the library's LP; they search small integer weights or compose
//! truth tables directly.

#![allow(dead_code)]

use std::collections::BTreeSet;

use capacity_core::separability::{open_cone_point, ConeFeasibility};
use capacity_core::PointSet;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every labeling of `points` (integer coordinates) of the form
/// `[⟨a,x⟩ ≥ t]` with `|a_i| ≤ bound` and half-integer `t`, as bit masks.
pub fn integer_weight_labelings(points: &[Vec<i64>], bound: i64) -> BTreeSet<u64> {
    let n = points.first().map_or(0, Vec::len);
    let span: i64 = points
        .iter()
        .flat_map(|p| p.iter().map(|c| c.abs()))
        .max()
        .unwrap_or(0)
        * bound
        * n as i64
        + 1;
    let mut out = BTreeSet::new();
    let mut a = vec![-bound; n];
    loop {
        let values: Vec<i64> = points
            .iter()
            .map(|p| p.iter().zip(&a).map(|(x, w)| x * w).sum())
            .collect();
        // t = k + 1/2, compare 2v ≥ 2k + 1.
        for k in -span..=span {
            let mask = values
                .iter()
                .enumerate()
                .filter(|(_, &v)| 2 * v >= 2 * k + 1)
                .fold(0u64, |m, (i, _)| m | 1 << i);
            out.insert(mask);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if a[i] < bound {
                a[i] += 1;
                break;
            }
            a[i] = -bound;
            i += 1;
        }
    }
}

/// Cube points in lexicographic order, coordinate 1 most significant.
pub fn cube_rows(n: usize) -> Vec<Vec<i64>> {
    (0..1u64 << n)
        .map(|c| (0..n).map(|j| ((c >> (n - 1 - j)) & 1) as i64).collect())
        .collect()
}

pub fn rows_of(points: &PointSet) -> Vec<Vec<i64>> {
    points
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| {
                    assert!(c.is_integer());
                    i64::try_from(c.to_integer()).expect("small coordinate")
                })
                .collect()
        })
        .collect()
}

/// Threshold functions on `H^n` as truth tables (bit `i` = value at the
/// `i`-th cube point). Weights up to 3 cover every function for `n ≤ 4`.
pub fn cube_threshold_tables(n: usize) -> Vec<u64> {
    integer_weight_labelings(&cube_rows(n), 3).into_iter().collect()
}

/// Functions `S → H^{n_L}` computed by `A(n_1,…,n_L)` on the listed input
/// codes, by composing every tuple of cube threshold functions layer by
/// layer. Each function is the vector of output codes.
pub fn naive_network_functions(sizes: &[usize], inputs: &[u64]) -> BTreeSet<Vec<u64>> {
    let mut current: BTreeSet<Vec<u64>> = BTreeSet::new();
    current.insert(inputs.to_vec());
    for pair in sizes.windows(2) {
        let (n, m) = (pair[0], pair[1]);
        let tables = cube_threshold_tables(n);
        let mut next = BTreeSet::new();
        for f in &current {
            let mut idx = vec![0usize; m];
            loop {
                let g: Vec<u64> = f
                    .iter()
                    .map(|&x| {
                        idx.iter().fold(0u64, |code, &t| {
                            (code << 1) | (tables[t] >> x & 1)
                        })
                    })
                    .collect();
                next.insert(g);
                let mut i = 0;
                loop {
                    if i == m {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < tables.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
        }
        current = next;
    }
    current
}

/// Number of full-dimensional cells of the arrangement `{a_i·x + b_i = 0}`:
/// sign vectors whose open region is nonempty.
pub fn arrangement_cells(planes: &[(Vec<i64>, i64)]) -> usize {
    let m = planes.len();
    let n = planes.first().map_or(0, |p| p.0.len());
    (0..1u64 << m)
        .filter(|signs| {
            let mut rows: Vec<Vec<BigInt>> = planes
                .iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let s: i64 = if signs >> i & 1 == 1 { 1 } else { -1 };
                    a.iter().chain([b]).map(|v| BigInt::from(s * v)).collect()
                })
                .collect();
            // Homogenizing coordinate must stay positive.
            let mut t = vec![BigInt::from(0); n + 1];
            t[n] = BigInt::from(1);
            rows.push(t);
            matches!(open_cone_point(&rows), ConeFeasibility::Interior(_))
        })
        .count()
}

/// A uniformly random subset of `H^n` with between `lo` and `hi` points.
pub fn random_cube_subset(rng: &mut impl Rng, n: usize, lo: usize, hi: usize) -> PointSet {
    let mut codes: Vec<u64> = (0..1u64 << n).collect();
    codes.shuffle(rng);
    let size = rng.gen_range(lo..=hi.min(codes.len()));
    let mut chosen = codes[..size].to_vec();
    chosen.sort_unstable();
    PointSet::from_codes(n, &chosen).expect("distinct cube points")
}

/// All ordered compositions of `total` into at least two positive parts.
pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=left {
            cur.push(p);
            go(left - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, &mut Vec::new(), &mut out);
    out
}

/// `Σ_k min(n_1,…,n_k)·n_k·n_{k+1}`, written out directly.
pub fn estimated(sizes: &[usize]) -> u128 {
    (0..sizes.len().saturating_sub(1))
        .map(|k| {
            let bar = *sizes[..=k].iter().min().unwrap() as u128;
            bar * sizes[k] as u128 * sizes[k + 1] as u128
        })
        .sum()
}

/// A random integer unit `h(⟨a,x⟩ + b/2)` with `|a_i| ≤ 3` and odd `b`, so
/// it never sits exactly on the threshold at a cube point.
pub fn random_unit(rng: &mut impl Rng, n: usize) -> capacity_core::ThresholdUnit {
    let weights: Vec<_> = (0..n).map(|_| capacity_core::int(rng.gen_range(-3..=3))).collect();
    let b = 2 * rng.gen_range(-(3 * n as i64)..=3 * n as i64) + 1;
    capacity_core::ThresholdUnit::new(weights, capacity_core::ratio(b, 2))
}

pub fn random_map(rng: &mut impl Rng, n: usize, m: usize) -> capacity_core::ThresholdMap {
    capacity_core::ThresholdMap::new(n, (0..m).map(|_| random_unit(rng, n)).collect())
        .expect("consistent widths")
}

/// A random network with the given layer sizes.
pub fn random_network(rng: &mut impl Rng, sizes: &[usize]) -> capacity_core::LayeredNetwork {
    capacity_core::LayeredNetwork::new(
        sizes.windows(2).map(|w| random_map(rng, w[0], w[1])).collect(),
    )
    .expect("consistent widths")
}

/// Value of a single-output network at each cube code, by direct evaluation.
pub fn cube_values(net: &capacity_core::LayeredNetwork) -> Vec<bool> {
    let n = net.input_dim();
    (0..1u64 << n)
        .map(|c| {
            let bits: Vec<bool> = (0..n).map(|j| c >> (n - 1 - j) & 1 == 1).collect();
            net.eval_bits(&bits).expect("valid input")[0]
        })
        .collect()
}
