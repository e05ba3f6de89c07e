//! Finite point sets, dichotomies and direct sums.
//!
//! Boolean points are identified with integer codes in which coordinate 1 is
//! the most significant bit, so `PointSet::cube(n)` lists `H^n` in
//! lexicographic order and point `i` of the cube has code `i`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CapacityError, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Bits of `code` as a length-`n` vector, coordinate 1 first.
pub fn code_to_bits(code: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (code >> (n - 1 - j)) & 1 == 1).collect()
}

pub fn bits_to_code(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

fn is_bit(value: &Rational) -> bool {
    value.is_zero() || value.is_one()
}

/// An ordered set of distinct rational points of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Vec<Rational>>,
    is_boolean: bool,
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(CapacityError::EmptyPointSet);
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(CapacityError::DimensionMismatch {
                    expected: dimension,
                    actual: p.len(),
                });
            }
            if !seen.insert(p) {
                return Err(CapacityError::DuplicatePoint { index });
            }
        }
        let is_boolean = points.iter().all(|p| p.iter().all(is_bit));
        Ok(Self {
            dimension,
            points,
            is_boolean,
        })
    }

    /// The Boolean cube `H^n` in lexicographic order. `H^0` is a single
    /// empty point.
    pub fn cube(n: usize) -> Self {
        assert!(n < 64, "cube dimension {n} is too large");
        let points = (0..1u64 << n)
            .map(|code| bits_point(code, n))
            .collect();
        Self {
            dimension: n,
            points,
            is_boolean: true,
        }
    }

    /// Boolean points given by their codes.
    pub fn from_codes(dimension: usize, codes: &[u64]) -> Result<Self> {
        Self::new(
            dimension,
            codes.iter().map(|&c| bits_point(c, dimension)).collect(),
        )
    }

    pub fn from_integer_rows(dimension: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            dimension,
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_boolean(&self) -> bool {
        self.is_boolean
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &[Rational] {
        &self.points[index]
    }

    /// Codes of the points when the set is Boolean.
    pub fn codes(&self) -> Option<Vec<u64>> {
        if !self.is_boolean || self.dimension >= 64 {
            return None;
        }
        Some(
            self.points
                .iter()
                .map(|p| p.iter().fold(0u64, |acc, v| (acc << 1) | u64::from(v.is_one())))
                .collect(),
        )
    }

    /// Points as bit vectors when the set is Boolean.
    pub fn bit_rows(&self) -> Option<Vec<Vec<bool>>> {
        if !self.is_boolean {
            return None;
        }
        Some(
            self.points
                .iter()
                .map(|p| p.iter().map(|v| v.is_one()).collect())
                .collect(),
        )
    }

    /// The points at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            self.dimension,
            indices.iter().map(|&i| self.points[i].clone()).collect(),
        )
    }
}

fn bits_point(code: u64, n: usize) -> Vec<Rational> {
    code_to_bits(code, n)
        .into_iter()
        .map(|b| if b { Rational::one() } else { Rational::zero() })
        .collect()
}

/// `A ⊕ B`: all concatenations `a ⊕ b`, ordered with `a` varying slowest.
pub fn direct_sum(a: &PointSet, b: &PointSet) -> PointSet {
    let mut points = Vec::with_capacity(a.len() * b.len());
    for pa in a.points() {
        for pb in b.points() {
            let mut p = pa.clone();
            p.extend(pb.iter().cloned());
            points.push(p);
        }
    }
    PointSet {
        dimension: a.dimension + b.dimension,
        points,
        is_boolean: a.is_boolean && b.is_boolean,
    }
}

/// `A ⊕ v`.
pub fn direct_sum_vector(a: &PointSet, v: &[Rational]) -> PointSet {
    let points = a
        .points()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.extend(v.iter().cloned());
            q
        })
        .collect();
    PointSet {
        dimension: a.dimension + v.len(),
        points,
        is_boolean: a.is_boolean && v.iter().all(is_bit),
    }
}

/// A binary labeling of a point set, index-aligned with its points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dichotomy {
    labels: Vec<bool>,
}

impl Dichotomy {
    pub fn new(labels: Vec<bool>) -> Self {
        Self { labels }
    }

    /// Bit `i` of `mask` is the label of point `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        Self {
            labels: (0..len).map(|i| (mask >> i) & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.labels.len() <= 64);
        self.labels
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self {
            labels: self.labels.iter().map(|b| !b).collect(),
        }
    }

    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self {
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}
