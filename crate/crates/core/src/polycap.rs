//! Polynomial threshold functions through the monomial lift.
//!
//! A degree-`d` polynomial threshold function on `S` is a linear threshold
//! function on the image of `S` under `x ↦ (all monomials of degree 1..d)`,
//! so `C_d(S) = C(lift(S))`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::combinatorics::{binomial, binomial_prefix_sum};
use crate::error::{CapacityError, Result};
use crate::points::{int, ratio, PointSet, Rational};
use crate::report::{Bound, BoundKind, CapacityReport};
use crate::setcap::{count_threshold_functions_with, CountOptions};

/// Rational enclosure `[2.718281, 2.718282]` of `e`.
pub fn e_lower() -> Rational {
    ratio(2_718_281, 1_000_000)
}

pub fn e_upper() -> Rational {
    ratio(2_718_282, 1_000_000)
}

/// `M(n,d) = Σ_{k≤d} C(n+k−1, k)`, the number of coefficients of a
/// degree-`d` polynomial in `n` variables.
pub fn monomial_count(n: u64, d: u64) -> BigUint {
    (0..=d).map(|k| binomial(n + k - 1, k)).sum()
}

/// Exponent vectors of all monomials of degree `1..=d`, by degree and then
/// lexicographically descending (`x_1² , x_1x_2, x_2²`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    pub n: usize,
    pub d: usize,
    pub monomials: Vec<Vec<u32>>,
}

fn exponents_of_degree(n: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        prefix.push(degree);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        exponents_of_degree(n, degree - first, prefix, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(CapacityError::Hypotheses(format!(
                "monomial basis needs n ≥ 1 and d ≥ 1, got n = {n}, d = {d}"
            )));
        }
        let size = monomial_count(n as u64, d as u64) - 1u32;
        if size > BigUint::from(4096u32) {
            return Err(CapacityError::CapExceeded {
                what: "monomial basis size",
                limit: 4096,
                actual: size.to_usize().unwrap_or(usize::MAX),
            });
        }
        let mut monomials = Vec::new();
        for degree in 1..=d as u32 {
            exponents_of_degree(n, degree, &mut Vec::new(), &mut monomials);
        }
        Ok(Self { n, d, monomials })
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Vec<Rational> {
        self.monomials
            .iter()
            .map(|e| {
                x.iter()
                    .zip(e)
                    .fold(Rational::one(), |acc, (xi, &p)| acc * num_traits::pow(xi.clone(), p as usize))
            })
            .collect()
    }
}

/// The image of `S` under the monomial map; injective because the degree-1
/// block is `x` itself.
pub fn monomial_lift(points: &PointSet, d: usize) -> Result<PointSet> {
    let basis = MonomialBasis::new(points.dimension(), d)?;
    PointSet::new(
        basis.len(),
        points.points().iter().map(|x| basis.evaluate(x)).collect(),
    )
}

/// Exact `|T_d(S)|` and the bounds
/// `C_d(S) ≤ log₂(2Σ_{k≤M−1} C(|S|−1,k)) ≤ (M−1)·log₂|S| ≤ (2en/d)^d·log₂|S|`.
pub fn poly_capacity(points: &PointSet, d: usize, opts: &CountOptions) -> Result<CapacityReport> {
    let lift = monomial_lift(points, d)?;
    let mut report = poly_capacity_bounds(points, d)?;
    report.exact_count = Some(count_threshold_functions_with(&lift, opts)?);
    Ok(report)
}

/// The bounds of [`poly_capacity`] without the exact count.
pub fn poly_capacity_bounds(points: &PointSet, d: usize) -> Result<CapacityReport> {
    if d == 0 {
        return Err(CapacityError::Hypotheses("degree must be at least 1".into()));
    }
    let n = points.dimension() as u64;
    let size = points.len() as u64;
    let lifted = monomial_count(n, d as u64) - 1u32;
    let lifted_u64 = lifted.to_u64().unwrap_or(u64::MAX);
    let log_size = (size as f64).log2();
    let valid = n > 1 && d > 1 && d as u64 <= n && size >= 2;

    let mut report = CapacityReport::new(format!(
        "degree-{d} polynomial thresholds on {size} points in dimension {n}"
    ));
    report.bounds.push(Bound::from_count(
        "poly-count-upper",
        BoundKind::Upper,
        binomial_prefix_sum(size - 1, lifted_u64) * 2u32,
        "affine dichotomy count in the lift, 2·Σ_{k≤M−1} C(|S|−1,k)",
    ));
    report.bounds.push(
        Bound::from_log2(
            "poly-log-upper",
            BoundKind::Upper,
            lifted_u64 as f64 * log_size,
            "(M(n,d)−1)·log₂|S|",
        )
        .with_hypotheses(valid),
    );
    let base = int(2) * e_upper() * int(n as i64) / int(d as i64);
    let power = num_traits::pow(base, d);
    report.bounds.push(
        Bound::from_log2(
            "poly-exp-upper",
            BoundKind::Upper,
            power.to_f64().unwrap_or(f64::INFINITY) * log_size,
            "(2en/d)^d·log₂|S|",
        )
        .with_hypotheses(valid),
    );
    report.bounds.push(Bound::from_count(
        "log-lower",
        BoundKind::Lower,
        BigUint::from(2 * size),
        "projection onto a generic line, 2|S| functions",
    ));
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
        .notes
        .push(format!("lift dimension M(n,d) − 1 = {lifted}"));
    Ok(report)
}

/// Terms of the single-hidden-layer bounds for `A(n,m,1)` with degree-`d`
/// gates, exact rationals with `e` replaced by its upper endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyNetworkTerms {
    /// `m·n^{d+1}/d!`.
    pub hidden: Rational,
    /// `m^{d+1}/d!`.
    pub output_cube: Rational,
    /// `n·(2em/d)^d`.
    pub output_lift: Rational,
    /// `hidden + min(output_cube, output_lift)`.
    pub upper: Rational,
}

pub fn poly_network_terms(n: u64, m: u64, d: u64) -> Result<PolyNetworkTerms> {
    if n == 0 || m == 0 || d == 0 {
        return Err(CapacityError::Hypotheses(format!(
            "need n, m, d ≥ 1, got ({n}, {m}, {d})"
        )));
    }
    let factorial: BigUint = (1..=d).map(BigUint::from).product();
    let fact = Rational::from_integer(factorial.into());
    let pow = |b: u64, e: u64| Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(b), e as usize));
    let hidden = int(m as i64) * pow(n, d + 1) / &fact;
    let output_cube = pow(m, d + 1) / &fact;
    let base = int(2) * e_upper() * int(m as i64) / int(d as i64);
    let output_lift = int(n as i64) * num_traits::pow(base, d as usize);
    let upper = &hidden + output_cube.clone().min(output_lift.clone());
    Ok(PolyNetworkTerms {
        hidden,
        output_cube,
        output_lift,
        upper,
    })
}

/// Bounds on `C_d(n,m,1)`. The lower term holds only asymptotically and is
/// reported as an order estimate; the per-unit term in the upper bound is
/// rigorous for `d = 1` only.
pub fn poly_network_bounds(n: u64, m: u64, d: u64) -> Result<CapacityReport> {
    let t = poly_network_terms(n, m, d)?;
    let mut report = CapacityReport::new(format!("A({n},{m},1) with degree-{d} gates"));
    report.bounds.push(Bound::from_log2(
        "poly-network-order",
        BoundKind::Order,
        t.hidden.to_f64().unwrap_or(f64::INFINITY),
        "asymptotic lower m·n^{d+1}/d!",
    ));
    report.bounds.push(
        Bound::from_log2(
            "poly-network-upper",
            BoundKind::Upper,
            t.upper.to_f64().unwrap_or(f64::INFINITY),
            "m·n^{d+1}/d! + min(m^{d+1}/d!, n·(2em/d)^d)",
        )
        .with_hypotheses(d == 1),
    );
    report.notes.push(format!(
        "output term candidates: m^(d+1)/d! = {}, n(2em/d)^d ≤ {}",
        t.output_cube, t.output_lift
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcap::count_threshold_functions;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(2, 2), BigUint::from(6u32));
        assert_eq!(monomial_count(3, 2), BigUint::from(10u32));
        for n in 1..8 {
            assert_eq!(monomial_count(n, 1), BigUint::from(n + 1));
            assert_eq!(monomial_count(n, 3), binomial(n + 3, 3));
        }
    }

    #[test]
    fn basis_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        assert_eq!(b.monomials, vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        let x = vec![int(2), int(3)];
        assert_eq!(b.evaluate(&x), vec![int(2), int(3), int(4), int(6), int(9)]);
    }

    #[test]
    fn lift_examples() {
        let lift = monomial_lift(&PointSet::cube(2), 2).unwrap();
        assert_eq!(lift.dimension(), 5);
        assert_eq!(lift.point(3), &vec![int(1); 5]);
        let s = PointSet::from_integer_rows(2, &[vec![0, 3], vec![-1, 2]]).unwrap();
        assert_eq!(monomial_lift(&s, 1).unwrap(), s);
    }

    #[test]
    fn xor_separable_after_lift() {
        let r = poly_capacity(&PointSet::cube(2), 2, &CountOptions::default()).unwrap();
        assert_eq!(r.exact_count, Some(BigUint::from(16u32)));
        assert!(r.violations().is_empty());
        let r = poly_capacity(&PointSet::cube(2), 1, &CountOptions::default()).unwrap();
        assert_eq!(r.exact_count, Some(count_threshold_functions(&PointSet::cube(2)).unwrap()));
    }

    #[test]
    fn network_terms() {
        let t = poly_network_terms(4, 3, 2).unwrap();
        assert_eq!(t.hidden, int(96));
        assert_eq!(t.output_cube, ratio(27, 2));
        assert!(t.output_lift > t.output_cube);
        assert_eq!(t.upper, ratio(219, 2));
        let t = poly_network_terms(5, 2, 1).unwrap();
        assert_eq!(t.hidden, int(50));
    }
}
