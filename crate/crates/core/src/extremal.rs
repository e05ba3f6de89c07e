//! Architectures that maximize or minimize the estimated capacity
//! `Ĉ(n_1,…,n_L) = Σ_k min(n_1,…,n_k)·n_k·n_{k+1}` under node and weight
//! budgets.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{CapacityError, Result};
use crate::points::{int, Rational};
use crate::setcap::region_count;

/// Largest node count accepted by [`brute_force_extremal`].
pub const MAX_BRUTE_FORCE_NODES: usize = 30;

/// Default length of the ranking returned by [`brute_force_extremal`].
pub const DEFAULT_RANKING: usize = 10;

/// `Ĉ` in machine integers; exact for every size the search can reach.
pub fn estimated_value(sizes: &[usize]) -> u128 {
    let mut bottleneck = usize::MAX;
    let mut total = 0u128;
    for pair in sizes.windows(2) {
        bottleneck = bottleneck.min(pair[0]);
        total += bottleneck as u128 * pair[0] as u128 * pair[1] as u128;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub sizes: Vec<usize>,
    pub value: u128,
}

impl Candidate {
    fn new(sizes: Vec<usize>) -> Self {
        let value = estimated_value(&sizes);
        Self { sizes, value }
    }
}

/// `Less` when `a` ranks ahead of `b`: better objective, then fewer layers,
/// then the lexicographically larger size vector.
fn rank(objective: Objective, a: &Candidate, b: &Candidate) -> Ordering {
    let by_value = match objective {
        Objective::Max => b.value.cmp(&a.value),
        Objective::Min => a.value.cmp(&b.value),
    };
    by_value
        .then(a.sizes.len().cmp(&b.sizes.len()))
        .then_with(|| b.sizes.cmp(&a.sizes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub best: Candidate,
    /// The leading candidates in ranking order, `best` first.
    pub ranking: Vec<Candidate>,
    /// Number of architectures examined.
    pub examined: u64,
}

struct TopK {
    objective: Objective,
    keep: usize,
    items: Vec<Candidate>,
    examined: u64,
}

impl TopK {
    fn new(objective: Objective, keep: usize) -> Self {
        Self {
            objective,
            keep: keep.max(1),
            items: Vec::new(),
            examined: 0,
        }
    }

    fn offer(&mut self, sizes: &[usize], value: u128) {
        self.examined += 1;
        if self.items.len() == self.keep {
            let worst = self.items.last().expect("non-empty");
            let beats_value = match self.objective {
                Objective::Max => value > worst.value,
                Objective::Min => value < worst.value,
            };
            if !beats_value && value != worst.value {
                return;
            }
        }
        let cand = Candidate {
            sizes: sizes.to_vec(),
            value,
        };
        let pos = self
            .items
            .partition_point(|c| rank(self.objective, c, &cand) == Ordering::Less);
        if pos < self.keep {
            self.items.insert(pos, cand);
            self.items.truncate(self.keep);
        }
    }

    fn merge(mut self, other: TopK) -> TopK {
        self.examined += other.examined;
        let examined = self.examined;
        for c in other.items {
            self.offer(&c.sizes, c.value);
        }
        self.examined = examined;
        self
    }
}

fn walk(remaining: usize, bottleneck: usize, value: u128, sizes: &mut Vec<usize>, top: &mut TopK) {
    if remaining == 0 {
        if sizes.len() >= 2 {
            top.offer(sizes, value);
        }
        return;
    }
    let last = *sizes.last().expect("first part is placed by the caller");
    for p in 1..=remaining {
        sizes.push(p);
        let term = bottleneck as u128 * last as u128 * p as u128;
        walk(remaining - p, bottleneck.min(p), value + term, sizes, top);
        sizes.pop();
    }
}

/// Exhaustive search over ordered compositions of `nodes` into at least two
/// parts, optionally with the first part fixed.
pub fn brute_force_extremal(
    nodes: usize,
    fixed_n1: Option<usize>,
    objective: Objective,
    keep: usize,
) -> Result<ExtremalResult> {
    if nodes > MAX_BRUTE_FORCE_NODES {
        return Err(CapacityError::CapExceeded {
            what: "node count for composition search",
            limit: MAX_BRUTE_FORCE_NODES,
            actual: nodes,
        });
    }
    let firsts: Vec<usize> = match fixed_n1 {
        Some(n1) if n1 >= 1 && n1 < nodes => vec![n1],
        Some(n1) => {
            return Err(CapacityError::Hypotheses(format!(
                "first layer {n1} leaves no room in {nodes} nodes"
            )))
        }
        None if nodes >= 2 => (1..nodes).collect(),
        None => {
            return Err(CapacityError::Hypotheses(format!(
                "{nodes} nodes cannot form two layers"
            )))
        }
    };
    let top = firsts
        .into_par_iter()
        .map(|n1| {
            let mut top = TopK::new(objective, keep);
            let mut sizes = vec![n1];
            walk(nodes - n1, n1, 0, &mut sizes, &mut top);
            top
        })
        .reduce(|| TopK::new(objective, keep), TopK::merge);
    Ok(ExtremalResult {
        best: top.items[0].clone(),
        ranking: top.items,
        examined: top.examined,
    })
}

/// The split `(n, N − n)` maximizing `n²(N − n)`, larger `n` on ties.
pub fn optimal_architecture_nodes(nodes: usize) -> Result<Candidate> {
    if nodes < 2 {
        return Err(CapacityError::Hypotheses(format!(
            "need at least 2 nodes, got {nodes}"
        )));
    }
    let best = (1..nodes)
        .map(|n| Candidate::new(vec![n, nodes - n]))
        .min_by(|a, b| rank(Objective::Max, a, b))
        .expect("at least one split");
    Ok(best)
}

/// `Ĉ(2N/3, N/3) = 4N³/27` for real `N`.
pub fn two_layer_optimum_value(nodes: &Rational) -> Rational {
    int(4) * nodes * nodes * nodes / int(27)
}

/// With `n_1` fixed: `(n_1, N/2, N/2 − n_1)` when `n_1 < N/2`, else
/// `(n_1, N − n_1)`. Integer rounding keeps the best of the three-layer
/// splits with middle layer within one of `N/2`, and the two-layer split.
pub fn optimal_architecture_nodes_input(nodes: usize, n1: usize) -> Result<Candidate> {
    if n1 == 0 || n1 >= nodes {
        return Err(CapacityError::Hypotheses(format!(
            "need 1 ≤ n1 < N, got n1 = {n1}, N = {nodes}"
        )));
    }
    let rest = nodes - n1;
    let mut candidates = vec![Candidate::new(vec![n1, rest])];
    if 2 * n1 < nodes {
        let (lo, hi) = (nodes / 2, nodes.div_ceil(2));
        for mid in [lo.saturating_sub(1), lo, hi, hi + 1] {
            if mid >= 1 && mid < rest {
                candidates.push(Candidate::new(vec![n1, mid, rest - mid]));
            }
        }
    }
    Ok(candidates
        .into_iter()
        .min_by(|a, b| rank(Objective::Max, a, b))
        .expect("two-layer candidate"))
}

/// `n_1·N²/4`, the real optimum when `n_1 ≤ N/2`.
pub fn small_input_value(nodes: usize, n1: usize) -> Rational {
    int(n1 as i64) * int(nodes as i64) * int(nodes as i64) / int(4)
}

/// `n_1²(N − n_1)`, the optimum when `n_1 ≥ N/2`.
pub fn large_input_value(nodes: usize, n1: usize) -> u128 {
    (n1 as u128).pow(2) * (nodes - n1) as u128
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Nodes(usize),
    Weights(usize),
}

/// `A(n_1, 1, …, 1)`, as deep as the budget allows.
pub fn minimal_architecture(budget: Budget, n1: usize) -> Result<Candidate> {
    if n1 == 0 {
        return Err(CapacityError::Hypotheses("input layer must be non-empty".into()));
    }
    let ones = match budget {
        Budget::Nodes(n) if n > n1 => n - n1,
        Budget::Weights(w) if w >= n1 => 1 + w - n1,
        _ => {
            return Err(CapacityError::Hypotheses(format!(
                "{budget:?} admits no architecture with input layer {n1}"
            )))
        }
    };
    let mut sizes = vec![n1];
    sizes.extend(std::iter::repeat(1).take(ones));
    Ok(Candidate::new(sizes))
}

/// Every architecture starting with `n1` whose connection count
/// `Σ n_k n_{k+1}` equals `weights`, ranked for `objective`.
pub fn brute_force_weights(weights: usize, n1: usize, objective: Objective) -> Result<ExtremalResult> {
    if weights > 40 {
        return Err(CapacityError::CapExceeded {
            what: "weight budget for composition search",
            limit: 40,
            actual: weights,
        });
    }
    fn go(left: usize, sizes: &mut Vec<usize>, top: &mut TopK) {
        if left == 0 {
            if sizes.len() >= 2 {
                let value = estimated_value(sizes);
                top.offer(sizes, value);
            }
            return;
        }
        let last = *sizes.last().expect("non-empty");
        for p in 1..=left / last {
            sizes.push(p);
            go(left - p * last, sizes, top);
            sizes.pop();
        }
    }
    let mut top = TopK::new(objective, DEFAULT_RANKING);
    go(weights, &mut vec![n1], &mut top);
    if top.items.is_empty() {
        return Err(CapacityError::Hypotheses(format!(
            "no architecture with input {n1} has exactly {weights} connections"
        )));
    }
    Ok(ExtremalResult {
        best: top.items[0].clone(),
        ranking: top.items,
        examined: top.examined,
    })
}

/// `(n_1 + Σ_{k≥3} n_k, n_2)`, which never has smaller `Ĉ`.
pub fn move_nodes_rewrite(sizes: &[usize]) -> Result<Vec<usize>> {
    if sizes.len() < 3 || sizes.contains(&0) {
        return Err(CapacityError::InvalidArchitecture(format!(
            "moving nodes needs at least three non-empty layers, got {sizes:?}"
        )));
    }
    let out = vec![sizes[0] + sizes[2..].iter().sum::<usize>(), sizes[1]];
    debug_assert!(estimated_value(&out) >= estimated_value(sizes));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionBound {
    /// `L(m,n) = Σ_{k≤n} C(m,k)`.
    pub regions: BigUint,
    /// `2·Σ_{k≤m} C(L(m,n) − 1, k)`.
    pub assignment_bound: BigUint,
}

/// Cells cut out by `m` hidden units on `ℝ^n` and the number of output
/// assignments over them.
pub fn shallow_region_bound(n: u64, m: u64) -> RegionBound {
    let regions = region_count(m, n, true);
    let assignment_bound = big_prefix_sum(&(&regions - 1u32), m) * 2u32;
    RegionBound {
        regions,
        assignment_bound,
    }
}

/// `Σ_{k≤upto} C(n,k)` for a big `n`.
fn big_prefix_sum(n: &BigUint, upto: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for k in 0..upto {
        let k = BigUint::from(k);
        if &k >= n {
            break;
        }
        term = term * (n - &k) / (k + 1u32);
        total += &term;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticGap {
    /// `(Σ x_k)²`.
    pub lhs: Rational,
    /// `4 Σ x_k x_{k+1}`.
    pub rhs: Rational,
}

pub fn quadratic_form_gap(x: &[Rational]) -> Result<QuadraticGap> {
    if x.iter().any(|v| !v.is_positive()) {
        return Err(CapacityError::Hypotheses("entries must be positive".into()));
    }
    let sum: Rational = x.iter().fold(Rational::zero(), |acc, v| acc + v);
    let adjacent = x
        .windows(2)
        .fold(Rational::zero(), |acc, w| acc + &w[0] * &w[1]);
    let gap = QuadraticGap {
        lhs: &sum * &sum,
        rhs: int(4) * adjacent,
    };
    if gap.lhs < gap.rhs {
        return Err(CapacityError::Verification(format!(
            "quadratic form inequality fails for {x:?}"
        )));
    }
    Ok(gap)
}
