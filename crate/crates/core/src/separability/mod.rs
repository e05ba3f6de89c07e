//! Deciding whether a dichotomy of a finite point set is a threshold function.
//!
//! On a finite set, `⟨a,x⟩+α ≥ 0` on positives and `< 0` on negatives is
//! equivalent to the strict system `s_i(⟨a,x_i⟩+α) > 0` with `s_i = ±1`:
//! shifting `α` by half the smallest negative margin removes any zero
//! margins. The strict system is an open-cone feasibility problem solved by
//! [`simplex::open_cone_point`].

pub mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::gcd_all;
use crate::error::{CapacityError, Result};
use crate::network::ThresholdUnit;
use crate::points::{int, Dichotomy, PointSet, Rational};

pub use simplex::{open_cone_point, ConeFeasibility};

/// A separating unit with its margins `⟨a,x⟩+α`, one per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    pub unit: ThresholdUnit,
    pub margins: Vec<Rational>,
}

impl SeparationWitness {
    /// The witness for the complementary labeling, `(−a, −α)`.
    pub fn negated(&self) -> Self {
        let unit = ThresholdUnit::new(
            self.unit.weights().iter().map(|w| -w).collect(),
            -self.unit.bias(),
        );
        Self {
            unit,
            margins: self.margins.iter().map(|m| -m).collect(),
        }
    }
}

/// Rows `(x_i, 1)` of the affine lift, each scaled to a primitive integer
/// vector. Positive scaling keeps every sign.
pub fn lifted_integer_rows(points: &PointSet) -> Vec<Vec<BigInt>> {
    points
        .points()
        .iter()
        .map(|p| {
            let lcm = p.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut row: Vec<BigInt> = p.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
            row.push(lcm);
            let g = gcd_all(&row);
            row.iter().map(|v| v / &g).collect()
        })
        .collect()
}

/// Separability of `labels` given the precomputed lifted rows.
pub fn separate_rows(
    points: &PointSet,
    rows: &[Vec<BigInt>],
    labels: &[bool],
) -> Option<SeparationWitness> {
    let signed: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(labels)
        .map(|(r, &pos)| if pos { r.clone() } else { r.iter().map(|v| -v).collect() })
        .collect();
    match open_cone_point(&signed) {
        ConeFeasibility::Empty { .. } => None,
        ConeFeasibility::Interior(w) => Some(normalize_witness(points, labels, w)),
    }
}

/// Makes `w` primitive, then scales it until every margin has magnitude at
/// least one. Integer point sets never need the second step.
fn normalize_witness(points: &PointSet, labels: &[bool], w: Vec<BigInt>) -> SeparationWitness {
    let g = gcd_all(&w);
    let w: Vec<BigInt> = if g.is_zero() { w } else { w.iter().map(|v| v / &g).collect() };
    let n = points.dimension();
    let unit = |scale: &BigInt| {
        ThresholdUnit::new(
            w[..n].iter().map(|v| BigRational::from_integer(v * scale)).collect(),
            BigRational::from_integer(&w[n] * scale),
        )
    };
    let first = unit(&BigInt::one());
    let margins: Vec<Rational> = points
        .points()
        .iter()
        .map(|p| first.affine(p).expect("witness has the point dimension"))
        .collect();
    let smallest = margins.iter().map(|m| m.abs()).min().expect("nonempty set");
    let scale = if smallest >= Rational::one() {
        BigInt::one()
    } else {
        (Rational::one() / smallest).ceil().to_integer()
    };
    let witness = if scale.is_one() {
        SeparationWitness {
            unit: first,
            margins,
        }
    } else {
        let s = BigRational::from_integer(scale.clone());
        SeparationWitness {
            unit: unit(&scale),
            margins: margins.into_iter().map(|m| m * &s).collect(),
        }
    };
    debug_assert!(witness_is_valid(&witness, labels));
    witness
}

/// Margins at least 1 on positives and at most −1 on negatives.
pub fn witness_is_valid(witness: &SeparationWitness, labels: &[bool]) -> bool {
    witness.margins.len() == labels.len()
        && witness.margins.iter().zip(labels).all(|(m, &pos)| {
            if pos {
                *m >= Rational::one()
            } else {
                *m <= -Rational::one()
            }
        })
}

/// Returns a verified witness if `labels` is a threshold function on
/// `points`, `Ok(None)` if it is not.
pub fn is_separable(points: &PointSet, labels: &Dichotomy) -> Result<Option<SeparationWitness>> {
    if labels.len() != points.len() {
        return Err(CapacityError::LabelCountMismatch {
            labels: labels.len(),
            points: points.len(),
        });
    }
    let rows = lifted_integer_rows(points);
    let witness = separate_rows(points, &rows, labels.labels());
    if let Some(w) = &witness {
        let recomputed: Vec<Rational> = points
            .points()
            .iter()
            .map(|p| w.unit.affine(p))
            .collect::<Result<_>>()?;
        if recomputed != w.margins || !witness_is_valid(w, labels.labels()) {
            return Err(CapacityError::Verification(
                "separating witness failed its margin check".into(),
            ));
        }
    }
    Ok(witness)
}

/// `is_separable(S, y) == is_separable(S, ¬y)`.
pub fn complement_closed(points: &PointSet, labels: &Dichotomy) -> Result<bool> {
    let a = is_separable(points, labels)?.is_some();
    let b = is_separable(points, &labels.complement())?.is_some();
    Ok(a == b)
}

/// Searches integer weights `|a_i| ≤ bound` and half-integer biases
/// `|2α| ≤ bound` for a unit realizing `labels` under the `h(0)=1` rule.
/// Intended as an independent cross-check for dimensions up to 3.
pub fn brute_force_separable(
    points: &PointSet,
    labels: &Dichotomy,
    bound: i64,
) -> Result<Option<ThresholdUnit>> {
    if labels.len() != points.len() {
        return Err(CapacityError::LabelCountMismatch {
            labels: labels.len(),
            points: points.len(),
        });
    }
    let n = points.dimension();
    if n > 3 {
        return Err(CapacityError::CapExceeded {
            what: "brute-force separability dimension",
            limit: 3,
            actual: n,
        });
    }
    let span = (2 * bound + 1) as usize;
    let total = span.pow(n as u32 + 1);
    for idx in 0..total {
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            coeffs.push((rest % span) as i64 - bound);
            rest /= span;
        }
        let unit = ThresholdUnit::new(
            coeffs[..n].iter().map(|&c| int(c)).collect(),
            BigRational::new(BigInt::from(coeffs[n]), BigInt::from(2)),
        );
        let realizes = points
            .points()
            .iter()
            .zip(labels.labels())
            .all(|(p, &l)| unit.eval(p).map_or(false, |v| v == l));
        if realizes {
            return Ok(Some(unit));
        }
    }
    Ok(None)
}
