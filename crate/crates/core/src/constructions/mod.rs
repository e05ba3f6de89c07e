//! Explicit threshold gadgets and the networks built from them.
//!
//! Every constructor checks its output exhaustively on its domain when the
//! domain is small enough (see [`VERIFY_CAP`]).

mod enrichment;
mod multiplex;
mod stack;

pub use enrichment::{balance_parameters, enrichment_map, BalanceParameters, Enrichment, EnrichmentKind};
pub use multiplex::{multiplex, selector_code, Multiplexed, MultiplexPlan};
pub use stack::{stack, LayerWidth, StackPlan, Stacked};

use num_traits::{One, Signed, Zero};

use crate::error::{CapacityError, Result};
use crate::network::{truth_table_capped, LayeredNetwork, ThresholdMap, ThresholdUnit, TruthTable};
use crate::points::{bits_to_code, code_to_bits, direct_sum, int, ratio, PointSet, Rational};

/// Largest input dimension checked exhaustively by the constructors.
pub const VERIFY_CAP: usize = 20;

/// Largest block width of [`exponential_map`], which has `2^k` outputs.
pub const EXPONENTIAL_CAP: usize = 10;

fn check_bits(theta: &[u8]) -> Result<()> {
    if theta.iter().any(|&b| b > 1) {
        return Err(CapacityError::NonBoolean {
            what: "target vector θ",
        });
    }
    Ok(())
}

/// `h(2⟨θ,x⟩ − Σx_i − Σθ_i + 1/2)`, which is 1 on `H^q` exactly at `x = θ`.
pub fn equality_indicator(theta: &[u8]) -> Result<ThresholdUnit> {
    check_bits(theta)?;
    let ones = theta.iter().filter(|&&b| b == 1).count() as i64;
    Ok(ThresholdUnit::new(
        theta.iter().map(|&b| int(2 * i64::from(b) - 1)).collect(),
        ratio(1 - 2 * ones, 2),
    ))
}

/// `g(x ⊕ y) = f(x) ∧ (y = θ)` as a single unit, for `x` in `domain` and
/// `y ∈ H^q`.
///
/// With `t(x) = ⟨a,x⟩+α`, `b = max t` and `g⁺ = min t` over `f⁻¹(1)` and
/// `g⁻ = max t` over `f⁻¹(0)`, the unit is
/// `h(K(t(x) − b) + 2⟨θ,y⟩ − Σy_i − Σθ_i + 1/2)` with
/// `K = min(1/(b − g⁻), 1/(2(b − g⁺)))`. Then `K(t − b)` lies in `[−1/2, 0]`
/// where `f = 1` and below `−1/2` where `f = 0`.
pub fn add_clause(unit: &ThresholdUnit, theta: &[u8], domain: &PointSet) -> Result<ThresholdUnit> {
    check_bits(theta)?;
    if unit.dimension() != domain.dimension() {
        return Err(CapacityError::DimensionMismatch {
            expected: domain.dimension(),
            actual: unit.dimension(),
        });
    }
    let q = theta.len();
    let n = unit.dimension();
    let values: Vec<Rational> = domain
        .points()
        .iter()
        .map(|x| unit.affine(x))
        .collect::<Result<_>>()?;
    let eq = equality_indicator(theta)?;
    let out = match clause_constants(&values) {
        ClauseShape::NoPositives => ThresholdUnit::constant(n + q, false),
        ClauseShape::NoNegatives => {
            let mut weights = vec![Rational::zero(); n];
            weights.extend(eq.weights().iter().cloned());
            ThresholdUnit::new(weights, eq.bias().clone())
        }
        ClauseShape::Scaled(ClauseConstants { k, b }) => {
            let mut weights: Vec<Rational> = unit.weights().iter().map(|w| w * &k).collect();
            weights.extend(eq.weights().iter().cloned());
            let bias = &k * (unit.bias() - &b) + eq.bias();
            ThresholdUnit::new(weights, bias)
        }
    };
    verify_clause(unit, theta, domain, &out)?;
    Ok(out)
}

/// The scale `K` and offset `b` of a clause unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseConstants {
    pub k: Rational,
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseShape {
    NoPositives,
    NoNegatives,
    Scaled(ClauseConstants),
}

/// Chooses `K` and `b` from the values `t(x)` of the unit on its domain.
pub fn clause_constants(values: &[Rational]) -> ClauseShape {
    let positive: Vec<&Rational> = values.iter().filter(|t| !t.is_negative()).collect();
    let negative: Vec<&Rational> = values.iter().filter(|t| t.is_negative()).collect();
    if positive.is_empty() {
        return ClauseShape::NoPositives;
    }
    if negative.is_empty() {
        return ClauseShape::NoNegatives;
    }
    let b = positive.iter().copied().max().unwrap().clone();
    let g_plus = positive.iter().copied().min().unwrap();
    let g_minus = negative.iter().copied().max().unwrap();
    let mut k = Rational::one() / (&b - g_minus);
    if &b != g_plus {
        let other = Rational::one() / (int(2) * (&b - g_plus));
        if other < k {
            k = other;
        }
    }
    ClauseShape::Scaled(ClauseConstants { k, b })
}

fn verify_clause(
    unit: &ThresholdUnit,
    theta: &[u8],
    domain: &PointSet,
    out: &ThresholdUnit,
) -> Result<()> {
    let q = theta.len();
    let cases = (domain.len() as u128) << q;
    if cases > 1u128 << VERIFY_CAP {
        return Err(CapacityError::CapExceeded {
            what: "clause verification domain size",
            limit: 1 << VERIFY_CAP,
            actual: usize::try_from(cases).unwrap_or(usize::MAX),
        });
    }
    let target = bits_to_code(&theta.iter().map(|&b| b == 1).collect::<Vec<_>>());
    for x in domain.points() {
        let fx = unit.eval(x)?;
        for code in 0..1u64 << q {
            let mut z = x.clone();
            z.extend(code_to_bits(code, q).into_iter().map(bit_value));
            let expected = fx && code == target;
            if out.eval(&z)? != expected {
                return Err(CapacityError::Verification(format!(
                    "clause unit disagrees at {z:?}"
                )));
            }
        }
    }
    Ok(())
}

fn bit_value(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicKind {
    And,
    Or,
    Not,
    Identity,
}

/// AND `h(Σx − m + 1/2)`, OR `h(Σx − 1/2)`, NOT `h(−x + 1/2)`, IDENTITY
/// `h(x − 1/2)`.
pub fn logic_unit(kind: LogicKind, fan_in: usize) -> Result<ThresholdUnit> {
    let unary = matches!(kind, LogicKind::Not | LogicKind::Identity);
    if fan_in == 0 || (unary && fan_in != 1) {
        return Err(CapacityError::InvalidArchitecture(format!(
            "{kind:?} cannot take fan-in {fan_in}"
        )));
    }
    let m = fan_in as i64;
    Ok(match kind {
        LogicKind::And => ThresholdUnit::new(vec![int(1); fan_in], ratio(1 - 2 * m, 2)),
        LogicKind::Or => ThresholdUnit::new(vec![int(1); fan_in], ratio(-1, 2)),
        LogicKind::Not => ThresholdUnit::new(vec![int(-1)], ratio(1, 2)),
        LogicKind::Identity => ThresholdUnit::new(vec![int(1)], ratio(-1, 2)),
    })
}

/// The map `H^k → {e_1,…,e_{2^k}}` sending the binary numeral `x` to the
/// bit pattern of `2^x`: component `j` (1-based, leftmost first) fires
/// exactly when `x` is the numeral `2^k − j`.
pub fn exponential_map(k: usize) -> Result<ThresholdMap> {
    if k == 0 || k > EXPONENTIAL_CAP {
        return Err(CapacityError::CapExceeded {
            what: "exponential map width",
            limit: EXPONENTIAL_CAP,
            actual: k,
        });
    }
    let size = 1u64 << k;
    let units = (1..=size)
        .map(|j| equality_indicator(&numeral(size - j, k)))
        .collect::<Result<Vec<_>>>()?;
    let map = ThresholdMap::new(k, units)?;
    for x in 0..size {
        let out = map.eval_bits(&code_to_bits(x, k))?;
        let lit = (size - 1 - x) as usize;
        if out.iter().enumerate().any(|(i, &b)| b != (i == lit)) {
            return Err(CapacityError::Verification(format!(
                "exponential map sends {x} to {out:?}"
            )));
        }
    }
    Ok(map)
}

/// Big-endian bits of `value` as 0/1 bytes.
pub fn numeral(value: u64, width: usize) -> Vec<u8> {
    code_to_bits(value, width).into_iter().map(u8::from).collect()
}

/// Result of comparing a network with a reference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub equal: bool,
    /// First input in lexicographic order where they differ.
    pub counterexample: Option<Vec<bool>>,
}

pub fn verify_equivalence(net: &LayeredNetwork, reference: &TruthTable) -> Result<Equivalence> {
    if net.input_dim() != reference.input_dim() || net.output_dim() != reference.output_dim() {
        return Err(CapacityError::DimensionMismatch {
            expected: reference.input_dim(),
            actual: net.input_dim(),
        });
    }
    let table = truth_table_capped(net, VERIFY_CAP)?;
    let first = table
        .values()
        .iter()
        .zip(reference.values())
        .position(|(a, b)| a != b);
    Ok(Equivalence {
        equal: first.is_none(),
        counterexample: first.map(|i| code_to_bits(i as u64, net.input_dim())),
    })
}

/// A unit on a block of a wider layer: `unit` reads coordinates
/// `offset..offset+unit.dimension()` of a `width`-dimensional input.
pub(crate) fn embed(unit: &ThresholdUnit, offset: usize, width: usize) -> ThresholdUnit {
    let mut weights = vec![Rational::zero(); width];
    for (i, w) in unit.weights().iter().enumerate() {
        weights[offset + i] = w.clone();
    }
    ThresholdUnit::new(weights, unit.bias().clone())
}

/// A unit reading arbitrary coordinates: `weights[i]` applies to
/// `coords[i]`.
pub(crate) fn embed_at(unit: &ThresholdUnit, coords: &[usize], width: usize) -> ThresholdUnit {
    let mut weights = vec![Rational::zero(); width];
    for (w, &c) in unit.weights().iter().zip(coords) {
        weights[c] = w.clone();
    }
    ThresholdUnit::new(weights, unit.bias().clone())
}

/// Identity copies of `coords` in a `width`-dimensional layer.
pub(crate) fn copies(coords: impl IntoIterator<Item = usize>, width: usize) -> Vec<ThresholdUnit> {
    let id = logic_unit(LogicKind::Identity, 1).expect("identity is valid");
    coords.into_iter().map(|c| embed(&id, c, width)).collect()
}

/// `S ⊕ H^q`.
pub(crate) fn with_selector(domain: &PointSet, q: usize) -> PointSet {
    direct_sum(domain, &PointSet::cube(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_points(n: usize) -> Vec<Vec<bool>> {
        (0..1u64 << n).map(|c| code_to_bits(c, n)).collect()
    }

    #[test]
    fn equality_indicator_examples() {
        let u = equality_indicator(&[1, 0]).unwrap();
        assert_eq!(u, ThresholdUnit::new(vec![int(1), int(-1)], ratio(-1, 2)));
        for n in 1..=3 {
            for t in 0..1u64 << n {
                let u = equality_indicator(&numeral(t, n)).unwrap();
                for (x, bits) in cube_points(n).iter().enumerate() {
                    assert_eq!(u.eval_bits(bits).unwrap(), x as u64 == t);
                }
            }
        }
        assert!(equality_indicator(&[2]).is_err());
    }

    #[test]
    fn all_ones_indicator_is_and() {
        let and = logic_unit(LogicKind::And, 3).unwrap();
        let eq = equality_indicator(&[1, 1, 1]).unwrap();
        for x in cube_points(3) {
            assert_eq!(and.eval_bits(&x).unwrap(), eq.eval_bits(&x).unwrap());
        }
    }

    #[test]
    fn clause_on_and() {
        let and = ThresholdUnit::from_ints(&[2, 2], -3);
        let g = add_clause(&and, &[1], &PointSet::cube(2)).unwrap();
        for (code, x) in cube_points(3).iter().enumerate() {
            assert_eq!(g.eval_bits(x).unwrap(), code == 7);
        }
    }

    #[test]
    fn clause_on_constant_one() {
        let one = ThresholdUnit::constant(2, true);
        let g = add_clause(&one, &[0, 1], &PointSet::cube(2)).unwrap();
        for x in cube_points(4) {
            assert_eq!(g.eval_bits(&x).unwrap(), !x[2] && x[3]);
        }
        let zero = ThresholdUnit::constant(2, false);
        let g = add_clause(&zero, &[0, 1], &PointSet::cube(2)).unwrap();
        assert!(cube_points(4).iter().all(|x| !g.eval_bits(x).unwrap()));
    }

    #[test]
    fn logic_units() {
        let or3 = logic_unit(LogicKind::Or, 3).unwrap();
        assert!(!or3.eval_bits(&[false, false, false]).unwrap());
        assert!(or3.eval_bits(&[false, true, false]).unwrap());
        let not = logic_unit(LogicKind::Not, 1).unwrap();
        assert!(!not.eval_bits(&[true]).unwrap());
        let id = logic_unit(LogicKind::Identity, 1).unwrap();
        assert!(id.eval_bits(&[true]).unwrap());
        assert!(!id.eval_bits(&[false]).unwrap());
        assert!(logic_unit(LogicKind::Not, 2).is_err());
        assert!(logic_unit(LogicKind::And, 0).is_err());
    }

    #[test]
    fn exponential_examples() {
        let f = exponential_map(2).unwrap();
        assert_eq!(f.eval_bits(&[false, true]).unwrap(), vec![false, false, true, false]);
        assert_eq!(f.eval_bits(&[true, true]).unwrap(), vec![true, false, false, false]);
        assert_eq!(f.eval_bits(&[false, false]).unwrap(), vec![false, false, false, true]);
    }

    #[test]
    fn equivalence_with_counterexample() {
        let and = ThresholdUnit::from_ints(&[2, 2], -3);
        let net = LayeredNetwork::new(vec![ThresholdMap::new(2, vec![and]).unwrap()]).unwrap();
        let and_table = TruthTable::new(2, 1, vec![0, 0, 0, 1]).unwrap();
        assert!(verify_equivalence(&net, &and_table).unwrap().equal);
        let or_table = TruthTable::new(2, 1, vec![0, 1, 1, 1]).unwrap();
        let r = verify_equivalence(&net, &or_table).unwrap();
        assert_eq!(r.counterexample, Some(vec![false, true]));
    }
}
