//! Set capacity `C(S) = log₂|T(S)|`, its bounds, and related counts.
//!
//! `T(S)` is enumerated by a depth-first search over labelings of the
//! points in order. A labeling of a prefix that is not separable has no
//! separable extension, so whole subtrees are pruned, and a child whose new
//! label already agrees with its parent's witness needs no LP at all. Only
//! labelings with point 0 positive are searched; the rest follow by
//! complementation.

use std::collections::BTreeSet;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial_prefix_sum, log2_biguint, pow2, rank};
use crate::error::{CapacityError, Result};
use crate::points::{Dichotomy, PointSet};
use crate::report::{Bound, BoundKind, CapacityReport};
use crate::separability::{
    lifted_integer_rows, open_cone_point, separate_rows, ConeFeasibility, SeparationWitness,
};

/// Largest set whose labelings are enumerated by default.
pub const DEFAULT_MAX_POINTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub max_points: usize,
    /// Worker threads; 0 uses rayon's global pool.
    pub jobs: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            max_points: DEFAULT_MAX_POINTS,
            jobs: 0,
        }
    }
}

fn check_cap(points: &PointSet, opts: &CountOptions) -> Result<()> {
    let limit = opts.max_points.min(63);
    if points.len() > limit {
        return Err(CapacityError::CapExceeded {
            what: "point count for labeling enumeration",
            limit,
            actual: points.len(),
        });
    }
    Ok(())
}

pub(crate) fn run_with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn dot(row: &[BigInt], w: &[BigInt]) -> BigInt {
    row.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// A separable prefix labeling with a strict witness in lifted coordinates.
struct Node {
    depth: usize,
    mask: u64,
    w: Vec<BigInt>,
}

fn children(rows: &[Vec<BigInt>], node: &Node) -> Vec<Node> {
    let k = node.depth;
    let s = dot(&rows[k], &node.w);
    let mut out = Vec::with_capacity(2);
    for label in [false, true] {
        let mask = node.mask | (u64::from(label) << k);
        let agrees = if label { s.is_positive() } else { s.is_negative() };
        if agrees {
            out.push(Node {
                depth: k + 1,
                mask,
                w: node.w.clone(),
            });
            continue;
        }
        let signed: Vec<Vec<BigInt>> = rows[..=k]
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if (mask >> i) & 1 == 1 {
                    r.clone()
                } else {
                    r.iter().map(|v| -v).collect()
                }
            })
            .collect();
        if let ConeFeasibility::Interior(w) = open_cone_point(&signed) {
            out.push(Node {
                depth: k + 1,
                mask,
                w,
            });
        }
    }
    out
}

fn dfs(rows: &[Vec<BigInt>], node: Node, leaves: &mut Vec<(u64, Vec<BigInt>)>) {
    if node.depth == rows.len() {
        leaves.push((node.mask, node.w));
        return;
    }
    for child in children(rows, &node) {
        dfs(rows, child, leaves);
    }
}

/// Separable labelings with point 0 positive, as `(mask, lifted witness)`,
/// sorted by mask.
fn positive_half(points: &PointSet, opts: &CountOptions) -> Result<Vec<(u64, Vec<BigInt>)>> {
    check_cap(points, opts)?;
    let rows = lifted_integer_rows(points);
    let d = points.dimension() + 1;
    // Point 0 positive: w = e_{last} works since the last lifted coordinate
    // is positive.
    let mut w = vec![BigInt::zero(); d];
    w[d - 1] = BigInt::one();
    let root = Node {
        depth: 1,
        mask: 1,
        w,
    };
    // Expand breadth-first until there is enough work to share.
    let target = 16 * opts.jobs.max(rayon::current_num_threads()).max(1);
    let mut frontier = vec![root];
    let mut leaves = Vec::new();
    while !frontier.is_empty() && frontier.len() < target {
        let mut next = Vec::new();
        for node in frontier {
            if node.depth == rows.len() {
                leaves.push((node.mask, node.w));
            } else {
                next.extend(children(&rows, &node));
            }
        }
        frontier = next;
    }
    let rest: Vec<Vec<(u64, Vec<BigInt>)>> = run_with_jobs(opts.jobs, || {
        frontier
            .into_par_iter()
            .map(|node| {
                let mut out = Vec::new();
                dfs(&rows, node, &mut out);
                out
            })
            .collect()
    });
    leaves.extend(rest.into_iter().flatten());
    leaves.sort_by_key(|(m, _)| *m);
    Ok(leaves)
}

/// All of `T(S)` as label masks (bit `i` = label of point `i`), sorted.
pub fn threshold_masks(points: &PointSet, opts: &CountOptions) -> Result<Vec<u64>> {
    let full = full_mask(points.len());
    let mut masks: Vec<u64> = positive_half(points, opts)?
        .into_iter()
        .flat_map(|(m, _)| [m, !m & full])
        .collect();
    masks.sort_unstable();
    Ok(masks)
}

/// All of `T(S)` with normalized witnesses, sorted by mask.
pub fn enumerate_threshold_functions(
    points: &PointSet,
    opts: &CountOptions,
) -> Result<Vec<(Dichotomy, SeparationWitness)>> {
    let rows = lifted_integer_rows(points);
    let mut out = Vec::new();
    for (mask, _) in positive_half(points, opts)? {
        let d = Dichotomy::from_mask(points.len(), mask);
        let witness = separate_rows(points, &rows, d.labels()).ok_or_else(|| {
            CapacityError::Verification("enumerated labeling lost its witness".into())
        })?;
        out.push((d.complement(), witness.negated()));
        out.push((d, witness));
    }
    out.sort_by_key(|(d, _)| d.to_mask());
    Ok(out)
}

fn full_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// `|T(S)|` with the default options.
pub fn count_threshold_functions(points: &PointSet) -> Result<BigUint> {
    count_threshold_functions_with(points, &CountOptions::default())
}

pub fn count_threshold_functions_with(points: &PointSet, opts: &CountOptions) -> Result<BigUint> {
    Ok(BigUint::from(positive_half(points, opts)?.len()) * 2u32)
}

/// `|T(S)|` by testing each of the `2^{|S|−1}` labelings with point 0
/// positive independently, in contiguous chunks. Slower than
/// [`count_threshold_functions`]; kept as an independent check.
pub fn count_threshold_functions_exhaustive(
    points: &PointSet,
    opts: &CountOptions,
) -> Result<BigUint> {
    check_cap(points, opts)?;
    let rows = lifted_integer_rows(points);
    let half = 1u64 << (points.len() - 1);
    let chunk = (half / 256).max(1);
    let chunks: Vec<u64> = (0..half.div_ceil(chunk)).collect();
    let count: u64 = run_with_jobs(opts.jobs, || {
        chunks
            .into_par_iter()
            .map(|c| {
                let mut found = 0u64;
                for i in c * chunk..((c + 1) * chunk).min(half) {
                    let mask = (i << 1) | 1;
                    let labels = Dichotomy::from_mask(points.len(), mask);
                    if separate_rows(points, &rows, labels.labels()).is_some() {
                        found += 1;
                    }
                }
                found
            })
            .sum()
    });
    Ok(BigUint::from(count) * 2u32)
}

/// The closed-form bounds on `C(S)` that depend only on `|S|`, the
/// dimension and Booleanness.
pub fn set_capacity_bounds(points: &PointSet) -> CapacityReport {
    let size = points.len() as u64;
    let n = points.dimension() as u64;
    let log_size = (size as f64).log2();
    let mut report = CapacityReport::new(format!(
        "set of {size} points in dimension {n}"
    ));
    report.bounds.push(Bound::from_count(
        "count-upper",
        BoundKind::Upper,
        binomial_prefix_sum(size - 1, n) * 2u32,
        "affine dichotomy count 2·Σ_{k≤n} C(|S|−1,k)",
    ));
    if n >= 4 {
        // Both log forms follow from the binomial sum only when n < |S|.
        let valid = n < size;
        let e_form = 1.0 + n as f64 * (std::f64::consts::E * size as f64 / n as f64).log2();
        report.bounds.push(
            Bound::from_log2(
                "log-upper-entropy",
                BoundKind::Upper,
                e_form,
                "1 + n·log₂(e|S|/n)",
            )
            .with_hypotheses(valid),
        );
        report.bounds.push(
            Bound::from_log2("log-upper", BoundKind::Upper, n as f64 * log_size, "n·log₂|S|")
                .with_hypotheses(valid),
        );
    }
    report.bounds.push(Bound::from_count(
        "log-lower",
        BoundKind::Lower,
        BigUint::from(2 * size),
        "projection onto a generic line, 2|S| functions",
    ));
    if points.is_boolean() && n < 32 && size == 1u64 << n {
        report.bounds.push(Bound::from_count(
            "cube-lower",
            BoundKind::Lower,
            pow2(n * n.saturating_sub(1) / 2),
            "whole cube, C(H^n) ≥ n(n−1)/2",
        ));
        // H^1 carries 4 functions, above 2^{n²} = 2.
        report.bounds.push(
            Bound::from_count("cube-upper", BoundKind::Upper, pow2(n * n), "whole cube, C(H^n) ≤ n²")
                .with_hypotheses(n >= 2),
        );
    }
    if points.is_boolean() {
        report.bounds.push(
            Bound::from_log2(
                "boolean-log-lower",
                BoundKind::Lower,
                log_size * log_size / 16.0,
                "Boolean sets: C(S) > (1/16)·log₂²|S|",
            )
            .strict(),
        );
    }
    report
}

/// Exact `|T(S)|` with all applicable bounds attached. The hierarchical
/// certificate is added for Boolean sets.
pub fn set_capacity(points: &PointSet, opts: &CountOptions) -> Result<CapacityReport> {
    let mut report = set_capacity_bounds(points);
    report.exact_count = Some(count_threshold_functions_with(points, opts)?);
    if points.is_boolean() {
        let h = hierarchical_lower_bound(points)?;
        report.bounds.push(Bound::from_count(
            "hierarchical-lower",
            BoundKind::Lower,
            h.certified_count,
            "coordinate-split decomposition, 2·Π(|V_i|+1)",
        ));
    }
    Ok(report)
}

/// One level `U_{i−1} = U_i ⊔ V_i` of a coordinate-split decomposition.
/// Indices refer to the original point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitLevel {
    pub coordinate: usize,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl SplitLevel {
    /// `p_i = |V_i| / |U_{i−1}|`.
    pub fn proportion(&self) -> f64 {
        self.v.len() as f64 / (self.u.len() + self.v.len()) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTree {
    pub levels: Vec<SplitLevel>,
}

impl DecompositionTree {
    pub fn leaf_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.v.len()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalBound {
    /// `2·Π(|V_i|+1) ≤ |T(S)|`.
    pub certified_count: BigUint,
    /// `C(S) > K`, the number of levels.
    pub depth_bits: usize,
    /// `C(S) > Σ log₂|V_i|`.
    pub leaf_log_sum: f64,
    pub tree: DecompositionTree,
}

/// Repeatedly splits the larger part along the most balanced coordinate
/// (lowest index on ties) until a single point remains.
pub fn hierarchical_lower_bound(points: &PointSet) -> Result<HierarchicalBound> {
    let Some(bits) = points.bit_rows() else {
        return Err(CapacityError::NonBoolean {
            what: "hierarchical decomposition input",
        });
    };
    let mut current: Vec<usize> = (0..points.len()).collect();
    let mut levels = Vec::new();
    while current.len() > 1 {
        let mut best: Option<(usize, usize)> = None;
        for c in 0..points.dimension() {
            let ones = current.iter().filter(|&&i| bits[i][c]).count();
            if ones == 0 || ones == current.len() {
                continue;
            }
            let larger = ones.max(current.len() - ones);
            if best.map_or(true, |(_, l)| larger < l) {
                best = Some((c, larger));
            }
        }
        let (c, _) = best.expect("distinct Boolean points differ in some coordinate");
        let (zeros, ones): (Vec<usize>, Vec<usize>) =
            current.iter().partition(|&&i| !bits[i][c]);
        let (u, v) = if zeros.len() >= ones.len() {
            (zeros, ones)
        } else {
            (ones, zeros)
        };
        levels.push(SplitLevel {
            coordinate: c,
            u: u.clone(),
            v,
        });
        current = u;
    }
    let certified_count = levels
        .iter()
        .fold(BigUint::from(2u32), |acc, l| acc * (l.v.len() as u64 + 1));
    let leaf_log_sum = levels.iter().map(|l| (l.v.len() as f64).log2()).sum();
    Ok(HierarchicalBound {
        certified_count,
        depth_bits: levels.len(),
        leaf_log_sum,
        tree: DecompositionTree { levels },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductBound {
    /// Iterating `C(U⊕V) ≥ (|U|−1)·log₂|V| + C(V)` from `C(U) = |U|`:
    /// `|T(U^{⊕p})| ≥ 2^{|U|}·|U|^{(|U|−1)·p(p−1)/2}`.
    pub iterated_count: BigUint,
    /// `(1/8)·p²·|U|·log₂|U|` bits.
    pub closed_form_log2: f64,
}

impl ProductBound {
    pub fn iterated_log2(&self) -> f64 {
        log2_biguint(&self.iterated_count)
    }
}

/// Lower bounds on `|T(U ⊕ ⋯ ⊕ U)|` (`p` copies) for a set `U` whose
/// lifted points `(u,1)` are linearly independent.
pub fn product_capacity_lower(u: &PointSet, p: u32) -> Result<ProductBound> {
    let k = u.len();
    if k < 2 || p < 2 {
        return Err(CapacityError::Hypotheses(format!(
            "product bound needs |U| > 1 and p > 1, got |U| = {k}, p = {p}"
        )));
    }
    let lifted: Vec<Vec<BigRational>> = u
        .points()
        .iter()
        .map(|x| {
            let mut r = x.clone();
            r.push(BigRational::one());
            r
        })
        .collect();
    let r = rank(&lifted);
    if r != k {
        return Err(CapacityError::RankCheck(format!(
            "U ⊕ 1 has rank {r}, needs {k} for linear independence"
        )));
    }
    let k64 = k as u64;
    let exponent = (k64 - 1) * u64::from(p) * u64::from(p - 1) / 2;
    let exponent = u32::try_from(exponent).map_err(|_| {
        CapacityError::Hypotheses("product bound exponent too large".into())
    })?;
    let iterated_count = pow2(k64) * BigUint::from(k64).pow(exponent);
    let p = f64::from(p);
    let closed_form_log2 = p * p * k as f64 * (k as f64).log2() / 8.0;
    Ok(ProductBound {
        iterated_count,
        closed_form_log2,
    })
}

/// Maximum number of regions cut by `m` hyperplanes in `ℝⁿ`: through the
/// origin `K(m,n) = 2Σ_{k<n} C(m−1,k)`, affine `L(m,n) = Σ_{k≤n} C(m,k)`.
pub fn region_count(m: u64, n: u64, affine: bool) -> BigUint {
    if affine {
        binomial_prefix_sum(m, n)
    } else if m == 0 {
        BigUint::one()
    } else if n == 0 {
        BigUint::zero()
    } else {
        binomial_prefix_sum(m - 1, n - 1) * 2u32
    }
}

/// Largest number of coordinates on which `S` projects onto the whole cube.
pub fn vc_dimension(points: &PointSet, opts: &CountOptions) -> Result<usize> {
    check_cap(points, opts)?;
    let Some(bits) = points.bit_rows() else {
        return Err(CapacityError::NonBoolean {
            what: "VC dimension input",
        });
    };
    let n = points.dimension();
    let top = n.min(usize::BITS as usize - 1 - points.len().leading_zeros() as usize);
    for size in (1..=top).rev() {
        if combinations(n, size).any(|idx| shatters(&bits, &idx)) {
            return Ok(size);
        }
    }
    Ok(0)
}

fn shatters(bits: &[Vec<bool>], coords: &[usize]) -> bool {
    let patterns: BTreeSet<u64> = bits
        .iter()
        .map(|p| coords.iter().fold(0u64, |acc, &c| (acc << 1) | u64::from(p[c])))
        .collect();
    patterns.len() == 1 << coords.len()
}

/// Index subsets of `0..n` of the given size in lexicographic order.
pub fn combinations(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if size <= n { Some((0..size).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = size;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Exact `|T(H^n)|`, memoized. `H^0` is a single point with 2 functions.
pub fn cube_count(n: usize) -> Result<BigUint> {
    static CACHE: Mutex<Vec<Option<BigUint>>> = Mutex::new(Vec::new());
    if let Some(Some(c)) = CACHE.lock().unwrap().get(n) {
        return Ok(c.clone());
    }
    let count = count_threshold_functions(&PointSet::cube(n))?;
    let mut cache = CACHE.lock().unwrap();
    if cache.len() <= n {
        cache.resize(n + 1, None);
    }
    cache[n] = Some(count.clone());
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::{int, ratio};

    fn opts() -> CountOptions {
        CountOptions::default()
    }

    #[test]
    fn small_counts() {
        let single = PointSet::from_integer_rows(2, &[vec![3, 4]]).unwrap();
        assert_eq!(count_threshold_functions(&single).unwrap(), BigUint::from(2u32));
        assert_eq!(
            count_threshold_functions(&PointSet::cube(2)).unwrap(),
            BigUint::from(14u32)
        );
        let line = PointSet::from_integer_rows(1, &[vec![0], vec![1], vec![5]]).unwrap();
        assert_eq!(count_threshold_functions(&line).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn cube_counts_match_exhaustive() {
        for n in 1..=3 {
            let h = PointSet::cube(n);
            let fast = count_threshold_functions(&h).unwrap();
            assert_eq!(fast, count_threshold_functions_exhaustive(&h, &opts()).unwrap());
            assert_eq!(fast, cube_count(n).unwrap());
        }
    }

    #[test]
    fn enumerated_witnesses_realize_their_labels() {
        let h2 = PointSet::cube(2);
        let all = enumerate_threshold_functions(&h2, &opts()).unwrap();
        assert_eq!(all.len(), 14);
        for (d, w) in &all {
            assert!(crate::separability::witness_is_valid(w, d.labels()));
        }
        let masks = threshold_masks(&h2, &opts()).unwrap();
        assert_eq!(masks, all.iter().map(|(d, _)| d.to_mask()).collect::<Vec<_>>());
        assert!(!masks.contains(&0b0110));
    }

    #[test]
    fn cap_is_enforced() {
        let h5 = PointSet::cube(5);
        let tight = CountOptions {
            max_points: 16,
            jobs: 1,
        };
        assert!(matches!(
            count_threshold_functions_with(&h5, &tight),
            Err(CapacityError::CapExceeded { limit: 16, actual: 32, .. })
        ));
    }

    #[test]
    fn bound_values() {
        let r = set_capacity_bounds(&PointSet::cube(3));
        assert_eq!(r.bound("count-upper").unwrap().count, Some(BigUint::from(128u32)));
        assert!(r.bound("log-upper").is_none());
        let single = PointSet::from_integer_rows(1, &[vec![0]]).unwrap();
        let r = set_capacity(&single, &opts()).unwrap();
        assert_eq!(r.bound("log-lower").unwrap().log2, 1.0);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn hierarchical_small_cases() {
        let h = hierarchical_lower_bound(&PointSet::cube(1)).unwrap();
        assert_eq!(h.certified_count, BigUint::from(4u32));
        let h = hierarchical_lower_bound(&PointSet::cube(2)).unwrap();
        assert_eq!(h.certified_count, BigUint::from(12u32));
        assert_eq!(h.tree.leaf_sizes(), vec![2, 1]);
        let single = PointSet::from_codes(3, &[5]).unwrap();
        assert_eq!(
            hierarchical_lower_bound(&single).unwrap().certified_count,
            BigUint::from(2u32)
        );
        let rational = PointSet::new(1, vec![vec![ratio(1, 2)]]).unwrap();
        assert!(hierarchical_lower_bound(&rational).is_err());
    }

    #[test]
    fn product_bound_basis() {
        let rows: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| i64::from(i == j)).collect())
            .collect();
        let u = PointSet::from_integer_rows(4, &rows).unwrap();
        let b = product_capacity_lower(&u, 2).unwrap();
        assert_eq!(b.closed_form_log2, 4.0);
        assert_eq!(b.iterated_count, BigUint::from(16u32 * 64));
        let dependent = PointSet::new(1, vec![vec![int(0)], vec![int(1)], vec![int(2)]]).unwrap();
        assert!(matches!(
            product_capacity_lower(&dependent, 2),
            Err(CapacityError::RankCheck(_))
        ));
    }

    #[test]
    fn region_formulas() {
        assert_eq!(region_count(3, 2, true), BigUint::from(7u32));
        assert_eq!(region_count(2, 2, false), BigUint::from(4u32));
        assert_eq!(region_count(0, 5, true), BigUint::one());
        assert_eq!(region_count(0, 5, false), BigUint::one());
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&PointSet::cube(3), &opts()).unwrap(), 3);
        let s = PointSet::from_codes(3, &[0b000, 0b110, 0b101, 0b011]).unwrap();
        assert_eq!(vc_dimension(&s, &opts()).unwrap(), 2);
        let single = PointSet::from_codes(3, &[0b101]).unwrap();
        assert_eq!(vc_dimension(&single, &opts()).unwrap(), 0);
    }

    #[test]
    fn combinations_enumerate_all() {
        let all: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }
}
