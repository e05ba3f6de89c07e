//! Exact enumeration of the functions computed by small architectures and
//! the estimated-capacity formula with its upper and lower bounds.
//!
//! A function `S → H^{n_k}` is stored as one output code per point of `S`.
//! Layer `k+1` of a network sees only the image `φ(S)`, so the functions
//! reachable after it are all tuples of threshold functions on `φ(S)`,
//! pulled back to `S`. Two networks are identified when they induce the
//! same function on `S`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::combinatorics::{binomial_prefix_sum, ceil_log2, pow2};
use crate::error::{CapacityError, Result};
use crate::network::{Architecture, TruthTable};
use crate::points::PointSet;
use crate::report::{Bound, BoundKind, CapacityReport};
use crate::setcap::{cube_count, run_with_jobs, threshold_masks, vc_dimension, CountOptions};

/// Named limits for exact network enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetBudget {
    /// Largest number of distinct functions allowed at any layer.
    pub max_layer_functions: usize,
    /// Largest number of layers `L`, input layer included.
    pub max_depth: usize,
    /// Largest input set.
    pub max_points: usize,
    pub jobs: usize,
}

impl Default for NetBudget {
    fn default() -> Self {
        Self {
            max_layer_functions: 512,
            max_depth: 4,
            max_points: 16,
            jobs: 0,
        }
    }
}

impl NetBudget {
    /// Sets a limit by name, as accepted on the command line.
    pub fn set(&mut self, name: &str, value: usize) -> Result<()> {
        match name {
            "max_layer_functions" => self.max_layer_functions = value,
            "max_depth" => self.max_depth = value,
            "max_points" => self.max_points = value,
            other => {
                return Err(CapacityError::InvalidArchitecture(format!(
                    "unknown budget {other:?}; expected max_layer_functions, max_depth or max_points"
                )))
            }
        }
        Ok(())
    }
}

/// Distinct functions `S → H^m`, each a vector of output codes indexed like
/// the points of `S`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSet {
    pub output_dim: usize,
    pub functions: Vec<Vec<u64>>,
}

impl FunctionSet {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn count(&self) -> BigUint {
        BigUint::from(self.functions.len())
    }

    /// Truth tables, valid when the input set was `PointSet::cube(n)`.
    pub fn truth_tables(&self, input_dim: usize) -> Result<Vec<TruthTable>> {
        self.functions
            .iter()
            .map(|f| TruthTable::new(input_dim, self.output_dim, f.clone()))
            .collect()
    }
}

fn budget_error(name: &'static str, limit: usize, needed: usize) -> CapacityError {
    CapacityError::BudgetExceeded {
        name,
        limit,
        needed,
    }
}

/// `base^exp` saturating at `usize::MAX`.
fn saturating_pow(base: usize, exp: usize) -> usize {
    (0..exp).fold(1usize, |acc, _| acc.saturating_mul(base))
}

/// All tuples `(g_1,…,g_width)` from `choices`, written as output codes on
/// `len` points. Inserts into `out` and fails once `out` exceeds `limit`.
fn insert_products(
    choices: &[u64],
    width: usize,
    len: usize,
    limit: usize,
    out: &mut HashSet<Vec<u64>>,
) -> Result<()> {
    let total = saturating_pow(choices.len(), width);
    if total > limit {
        return Err(budget_error("max_layer_functions", limit, total));
    }
    let mut idx = vec![0usize; width];
    loop {
        let codes: Vec<u64> = (0..len)
            .map(|i| {
                idx.iter()
                    .fold(0u64, |acc, &j| (acc << 1) | ((choices[j] >> i) & 1))
            })
            .collect();
        out.insert(codes);
        if out.len() > limit {
            return Err(budget_error("max_layer_functions", limit, out.len()));
        }
        // Odometer with the last unit varying fastest.
        let mut pos = width;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Sorted distinct output codes.
fn image(f: &[u64]) -> Vec<u64> {
    let mut img = f.to_vec();
    img.sort_unstable();
    img.dedup();
    img
}

fn is_subset(small: &[u64], big: &[u64]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// The set `T(S, n₁,…,n_L)` with `n₁ = dim S`.
pub fn enumerate_network_functions(
    arch: &Architecture,
    points: &PointSet,
    budget: &NetBudget,
) -> Result<FunctionSet> {
    let sizes = arch.sizes();
    if sizes.len() < 2 {
        return Err(CapacityError::InvalidArchitecture(
            "enumeration needs at least two layers".into(),
        ));
    }
    if sizes[0] != points.dimension() {
        return Err(CapacityError::DimensionMismatch {
            expected: sizes[0],
            actual: points.dimension(),
        });
    }
    if sizes.len() > budget.max_depth {
        return Err(budget_error("max_depth", budget.max_depth, sizes.len()));
    }
    if points.len() > budget.max_points.min(64) {
        return Err(budget_error("max_points", budget.max_points.min(64), points.len()));
    }
    if sizes[1..].iter().any(|&s| s > 64) {
        return Err(CapacityError::InvalidArchitecture(
            "layers wider than 64 units are not supported".into(),
        ));
    }
    let len = points.len();
    let limit = budget.max_layer_functions;
    let opts = CountOptions {
        max_points: 64,
        jobs: budget.jobs,
    };

    let first = threshold_masks(points, &opts)?;
    let mut layer = HashSet::new();
    insert_products(&first, sizes[1], len, limit, &mut layer)?;

    for k in 2..sizes.len() {
        let (prev, width) = (sizes[k - 1], sizes[k]);
        let current: Vec<Vec<u64>> = layer.into_iter().collect();
        let images: BTreeSet<Vec<u64>> = current.iter().map(|f| image(f)).collect();
        let images: Vec<Vec<u64>> = images.into_iter().collect();
        let tables: Vec<Vec<u64>> = run_with_jobs(budget.jobs, || {
            images
                .par_iter()
                .map(|img| threshold_masks(&PointSet::from_codes(prev, img)?, &opts))
                .collect::<Result<Vec<_>>>()
        })?;
        let table_of: BTreeMap<&Vec<u64>, &Vec<u64>> = images.iter().zip(&tables).collect();

        // G(φ): threshold functions on φ(S) pulled back to S.
        let mut pulled: BTreeSet<Vec<u64>> = BTreeSet::new();
        for f in &current {
            let img = image(f);
            let masks = table_of[&img];
            let pos: Vec<usize> = f.iter().map(|c| img.binary_search(c).unwrap()).collect();
            let mut g: Vec<u64> = masks
                .iter()
                .map(|&t| {
                    pos.iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, &p)| acc | (((t >> p) & 1) << i))
                })
                .collect();
            g.sort_unstable();
            pulled.insert(g);
        }
        // Products over a subset are already covered by the superset.
        let mut by_size: Vec<Vec<u64>> = pulled.into_iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Vec<u64>> = Vec::new();
        for g in by_size {
            if !kept.iter().any(|k| is_subset(&g, k)) {
                kept.push(g);
            }
        }
        let mut next = HashSet::new();
        for g in &kept {
            insert_products(g, width, len, limit, &mut next)?;
        }
        layer = next;
    }

    let mut functions: Vec<Vec<u64>> = layer.into_iter().collect();
    functions.sort_unstable();
    Ok(FunctionSet {
        output_dim: *sizes.last().unwrap(),
        functions,
    })
}

/// `Ĉ(n₁,…,n_L) = Σ_{k<L} min(n₁,…,n_k)·n_k·n_{k+1}` with its terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimatedCapacity {
    pub value: BigUint,
    pub terms: Vec<BigUint>,
}

pub fn estimated_capacity(sizes: &[usize]) -> EstimatedCapacity {
    let mut bottleneck = usize::MAX;
    let terms: Vec<BigUint> = sizes
        .windows(2)
        .map(|w| {
            bottleneck = bottleneck.min(w[0]);
            BigUint::from(bottleneck) * w[0] * w[1]
        })
        .collect();
    EstimatedCapacity {
        value: terms.iter().sum(),
        terms,
    }
}

/// `n·n₁·n₂ + Σ_{k=2}^{L−1} min(n,n₂,…,n_k)·n_k·n_{k+1}` for an input set of
/// `2^n` points.
fn restricted_formula(sizes: &[usize], n: f64) -> f64 {
    let mut bottleneck = n;
    let mut total = n * sizes[0] as f64 * sizes[1] as f64;
    for w in sizes[1..].windows(2) {
        bottleneck = bottleneck.min(w[0] as f64);
        total += bottleneck * w[0] as f64 * w[1] as f64;
    }
    total
}

/// Upper bounds on `C(S,n₁,…,n_L)` where `|S| = 2^{input_log2}`, or on
/// `C(n₁,…,n_L)` when no input size is given.
pub fn network_upper_bounds(arch: &Architecture, input_log2: Option<f64>) -> CapacityReport {
    let sizes = arch.sizes();
    let mut report = CapacityReport::new(format!("architecture {arch}"));
    if sizes.len() < 2 {
        report.notes.push("no bounds for a single layer".into());
        return report;
    }
    let hypotheses = sizes[..sizes.len() - 1].iter().all(|&s| s >= 4);
    match input_log2 {
        Some(n) => {
            report.bounds.push(
                Bound::from_log2(
                    "restricted-upper",
                    BoundKind::Upper,
                    restricted_formula(sizes, n),
                    "n·n₁·n₂ + Σ min(n,n₂,…,n_k)·n_k·n_{k+1}, |S| = 2^n",
                )
                .with_hypotheses(hypotheses),
            );
            let padded: Vec<usize> = padded(sizes);
            report.bounds.push(Bound::from_log2(
                "padded-restricted-upper",
                BoundKind::Upper,
                restricted_formula(&padded, n),
                "restricted formula with non-output layers widened fourfold",
            ));
        }
        None => {
            let est = estimated_capacity(sizes);
            report.bounds.push(
                Bound::from_log2(
                    "upper",
                    BoundKind::Upper,
                    big_f64(&est.value),
                    "Σ min(n₁,…,n_k)·n_k·n_{k+1}",
                )
                .with_hypotheses(hypotheses),
            );
            report.bounds.push(Bound::from_log2(
                "padded-upper",
                BoundKind::Upper,
                big_f64(&estimated_capacity(&padded(sizes)).value),
                "formula with non-output layers widened fourfold",
            ));
        }
    }
    if sizes.len() >= 3 && *sizes.last().unwrap() == 1 {
        let inner = &sizes[..sizes.len() - 1];
        report.bounds.push(Bound::from_log2(
            "single-output-order",
            BoundKind::Order,
            big_f64(&estimated_capacity(inner).value),
            "an extra output node changes the formula by at most a factor 2",
        ));
    }
    report
}

fn padded(sizes: &[usize]) -> Vec<usize> {
    let last = sizes.len() - 1;
    sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| if i < last { 4 * s } else { s })
        .collect()
}

fn big_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// `|T(H^n)|` as a lower-bound count, exact for `n ≤ 4` and from the
/// `n(n−1)/2` cube bound beyond.
fn cube_lower(n: usize) -> Result<Bound> {
    if n <= 4 {
        Ok(Bound::from_count(
            "cube",
            BoundKind::Lower,
            cube_count(n)?,
            "exact cube count",
        ))
    } else {
        let bits = (n * (n - 1) / 2) as u64;
        Ok(Bound::from_count(
            "cube",
            BoundKind::Lower,
            pow2(bits),
            "C(H^n) ≥ n(n−1)/2",
        ))
    }
}

/// `C(n,m,1) ≥ C(H^{n−m⁻})·m` with `m⁻ = ⌈log₂ m⌉`.
pub fn multiplexing_lower_bound(n: usize, m: usize) -> Result<Bound> {
    let selector = ceil_log2(m as u64) as usize;
    if n <= selector {
        return Err(CapacityError::Unavailable(format!(
            "multiplexing {m} functions needs more than {selector} inputs, got {n}"
        )));
    }
    let base = cube_lower(n - selector)?;
    let count = base.count.expect("cube bounds carry counts").pow(m as u32);
    Ok(Bound::from_count(
        "multiplexing-lower",
        BoundKind::Lower,
        count,
        "hidden-layer multiplexing, C(n,m,1) ≥ C(H^{n−⌈log₂m⌉})·m",
    ))
}

/// Lower bounds on `C(n₁,…,n_L)`.
pub fn network_lower_bounds(arch: &Architecture) -> Result<CapacityReport> {
    let sizes = arch.sizes();
    if sizes.len() < 2 {
        return Err(CapacityError::InvalidArchitecture(
            "lower bounds need at least two layers".into(),
        ));
    }
    let mut report = CapacityReport::new(format!("architecture {arch}"));
    if sizes.len() == 2 {
        let (n, m) = (sizes[0], sizes[1]);
        let base = cube_lower(n)?;
        let count = base.count.clone().unwrap().pow(m as u32);
        report.bounds.push(Bound::from_count(
            "parallel-units-lower",
            BoundKind::Lower,
            count,
            "C(n,m) = C(H^n)·m",
        ));
        report.bounds.push(Bound::from_count(
            "cube-lower",
            BoundKind::Lower,
            pow2((m * n * (n - 1) / 2) as u64),
            "C(H^n) ≥ n(n−1)/2 per unit",
        ));
    }
    if sizes.len() == 3 && sizes[2] == 1 {
        match multiplexing_lower_bound(sizes[0], sizes[1]) {
            Ok(b) => report.bounds.push(b),
            Err(e) => report.notes.push(e.to_string()),
        }
    }
    report.bounds.push(Bound::from_log2(
        "estimated-order",
        BoundKind::Order,
        big_f64(&estimated_capacity(sizes).value),
        "Σ min(n₁,…,n_k)·n_k·n_{k+1} up to an unspecified absolute constant",
    ));
    Ok(report)
}

/// Exact `|T(n₁,…,n_L)|` on `H^{n₁}` with upper and lower bounds attached.
pub fn exact_network_capacity(arch: &Architecture, budget: &NetBudget) -> Result<CapacityReport> {
    let cube_dim = arch.input_size();
    let limit = budget.max_points.min(64);
    if cube_dim > 6 || 1usize << cube_dim > limit {
        return Err(budget_error("max_points", limit, 1usize << cube_dim.min(63)));
    }
    let functions = enumerate_network_functions(arch, &PointSet::cube(cube_dim), budget)?;
    let mut report = network_upper_bounds(arch, None);
    let lower = network_lower_bounds(arch)?;
    report.bounds.extend(lower.bounds);
    report.notes.extend(lower.notes);
    report.exact_count = Some(functions.count());
    Ok(report)
}

/// Lower bound on `C(S,n₁,n₂,…,n_L)` through the VC dimension `d` of `S`:
/// `S` contains a copy of `H^d` on some coordinates, so the capacity is at
/// least `C(d,n₂,…,n_L)`.
pub fn restricted_capacity_bounds(
    points: &PointSet,
    tail: &[usize],
    budget: &NetBudget,
) -> Result<CapacityReport> {
    if !points.is_boolean() {
        return Err(CapacityError::NonBoolean {
            what: "restricted capacity input set",
        });
    }
    if tail.is_empty() || tail.contains(&0) {
        return Err(CapacityError::InvalidArchitecture(
            "tail layer sizes must be positive and nonempty".into(),
        ));
    }
    let n1 = points.dimension();
    let opts = CountOptions {
        max_points: budget.max_points.max(points.len()),
        jobs: budget.jobs,
    };
    let d = vc_dimension(points, &opts)?;
    let mut sizes = vec![n1];
    sizes.extend_from_slice(tail);
    let arch = Architecture::new(sizes.clone())?;
    let mut report = CapacityReport::new(format!("set of {} points through {arch}", points.len()));
    report.notes.push(format!("vc_dimension = {d}"));

    if d == 0 {
        // A single point: the network can output any constant vector.
        report.bounds.push(Bound::from_count(
            "vc-reduction-lower",
            BoundKind::Lower,
            pow2(*tail.last().unwrap() as u64),
            "C(S,n₁,…) ≥ C(H^d,n₂,…), d = 0",
        ));
    } else {
        let mut reduced = vec![d];
        reduced.extend_from_slice(tail);
        let reduced = Architecture::new(reduced)?;
        match enumerate_network_functions(&reduced, &PointSet::cube(d), budget) {
            Ok(f) => report.bounds.push(Bound::from_count(
                "vc-reduction-lower",
                BoundKind::Lower,
                f.count(),
                "C(S,n₁,…) ≥ C(d,n₂,…,n_L), exact",
            )),
            Err(e @ CapacityError::BudgetExceeded { .. }) => {
                report.notes.push(format!("exact reduction skipped: {e}"));
                report.bounds.push(Bound::from_log2(
                    "vc-reduction-order",
                    BoundKind::Order,
                    big_f64(&estimated_capacity(reduced.sizes()).value),
                    "C(S,n₁,…) ≥ C(d,n₂,…,n_L) ≍ Ĉ(d,n₂,…,n_L)",
                ));
            }
            Err(e) => return Err(e),
        }
    }

    let sauer = binomial_prefix_sum(n1 as u64, d as u64);
    let sauer_ok = BigUint::from(points.len()) <= sauer;
    report.notes.push(format!(
        "|S| = {} ≤ Σ_{{k≤d}} C(n₁,k) = {sauer}: {sauer_ok}",
        points.len()
    ));
    let n = (points.len() as f64).log2();
    if n > 0.0 {
        let estimate = n / (std::f64::consts::E * n1 as f64 / n).log2();
        report.notes.push(format!(
            "order estimate d ≳ n/log₂(e·n₁/n) = {estimate:.4} with n = log₂|S|"
        ));
    }
    let upper = network_upper_bounds(&arch, Some(n));
    report.bounds.extend(upper.bounds);
    Ok(report)
}

/// Whether `|S| ≤ Σ_{k≤d} C(n₁,k)` for the VC dimension `d` of `S`.
pub fn sauer_shelah_holds(points: &PointSet, d: usize) -> bool {
    BigUint::from(points.len()) <= binomial_prefix_sum(points.dimension() as u64, d as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arch(s: &[usize]) -> Architecture {
        Architecture::new(s.to_vec()).unwrap()
    }

    fn count(s: &[usize], budget: &NetBudget) -> usize {
        enumerate_network_functions(&arch(s), &PointSet::cube(s[0]), budget)
            .unwrap()
            .len()
    }

    #[test]
    fn small_architecture_counts() {
        let b = NetBudget::default();
        assert_eq!(count(&[2, 1], &b), 14);
        assert_eq!(count(&[1, 1], &b), 4);
        assert_eq!(count(&[2, 2], &b), 196);
    }

    #[test]
    fn truth_tables_of_single_units() {
        let f = enumerate_network_functions(&arch(&[2, 1]), &PointSet::cube(2), &NetBudget::default())
            .unwrap();
        let tables = f.truth_tables(2).unwrap();
        assert!(tables.iter().any(|t| t.values() == [0, 0, 0, 1]));
        assert!(!tables.iter().any(|t| t.values() == [0, 1, 1, 0]));
    }

    #[test]
    fn budgets_are_named() {
        let b = NetBudget::default();
        let err = enumerate_network_functions(&arch(&[2, 3]), &PointSet::cube(2), &b).unwrap_err();
        assert!(matches!(
            err,
            CapacityError::BudgetExceeded { name: "max_layer_functions", limit: 512, .. }
        ));
        let err = enumerate_network_functions(&arch(&[1, 1, 1, 1, 1]), &PointSet::cube(1), &b)
            .unwrap_err();
        assert!(matches!(err, CapacityError::BudgetExceeded { name: "max_depth", .. }));
        let mut b = NetBudget::default();
        b.set("max_depth", 9).unwrap();
        assert_eq!(b.max_depth, 9);
        assert!(b.set("depth", 9).is_err());
    }

    #[test]
    fn estimated_values() {
        assert_eq!(estimated_capacity(&[8, 4]).value, BigUint::from(256u32));
        let e = estimated_capacity(&[4, 3, 2, 1]);
        assert_eq!(e.value, BigUint::from(70u32));
        assert_eq!(e.terms, vec![BigUint::from(48u32), BigUint::from(18u32), BigUint::from(4u32)]);
        let two = estimated_capacity(&[5, 3]).value;
        let three = estimated_capacity(&[5, 3, 1]).value;
        assert_eq!(three - two, BigUint::from(3u32 * 3));
    }

    #[test]
    fn upper_bound_values() {
        let r = network_upper_bounds(&arch(&[4, 3]), None);
        assert_eq!(r.bound("upper").unwrap().log2, 48.0);
        assert!(r.bound("upper").unwrap().hypotheses_hold);
        let r = network_upper_bounds(&arch(&[5, 4, 4]), Some(3.0));
        assert_eq!(r.bound("restricted-upper").unwrap().log2, 108.0);
        let r = network_upper_bounds(&arch(&[2, 1]), None);
        assert!(!r.bound("upper").unwrap().hypotheses_hold);
    }

    #[test]
    fn lower_bound_values() {
        let b = multiplexing_lower_bound(3, 2).unwrap();
        assert_eq!(b.count, Some(BigUint::from(14u32 * 14)));
        let b = multiplexing_lower_bound(4, 2).unwrap();
        assert_eq!(b.count, Some(BigUint::from(104u32 * 104)));
        assert!(matches!(
            multiplexing_lower_bound(1, 2),
            Err(CapacityError::Unavailable(_))
        ));
        let r = network_lower_bounds(&arch(&[6, 1])).unwrap();
        assert_eq!(r.bound("cube-lower").unwrap().log2, 15.0);
    }

    #[test]
    fn exact_capacity_reports() {
        let r = exact_network_capacity(&arch(&[2, 1]), &NetBudget::default()).unwrap();
        assert_eq!(r.exact_count, Some(BigUint::from(14u32)));
        assert!(r.violations().is_empty(), "{:?}", r.violations());
        assert!((r.log2_exact().unwrap() - 3.807).abs() < 1e-3);
    }

    #[test]
    fn restricted_examples() {
        let b = NetBudget::default();
        // H² embedded in the first two coordinates of H⁴.
        let s = PointSet::from_codes(4, &[0b0000, 0b0100, 0b1000, 0b1100]).unwrap();
        let r = restricted_capacity_bounds(&s, &[2, 1], &b).unwrap();
        let exact = count(&[2, 2, 1], &b);
        assert_eq!(
            r.bound("vc-reduction-lower").unwrap().count,
            Some(BigUint::from(exact))
        );
        let single = PointSet::from_codes(3, &[0b011]).unwrap();
        let r = restricted_capacity_bounds(&single, &[2], &b).unwrap();
        assert_eq!(r.bound("vc-reduction-lower").unwrap().count, Some(BigUint::from(4u32)));
        assert!(sauer_shelah_holds(&s, 2));
    }
}
