//! Threshold units, threshold maps, layered networks and truth tables.
//!
//! Every unit computes `h(⟨a,x⟩ + α)` where `h(t) = 1` iff `t ≥ 0`. All
//! arithmetic is exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CapacityError, Result};
use crate::points::{bits_to_code, code_to_bits, int, Rational};

/// Largest input dimension `truth_table` enumerates by default.
pub const DEFAULT_TRUTH_TABLE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdUnit {
    weights: Vec<Rational>,
    bias: Rational,
}

impl ThresholdUnit {
    pub fn new(weights: Vec<Rational>, bias: Rational) -> Self {
        Self { weights, bias }
    }

    pub fn from_ints(weights: &[i64], bias: i64) -> Self {
        Self::new(weights.iter().map(|&w| int(w)).collect(), int(bias))
    }

    /// The unit with zero weights and bias `0` (always 1) or `-1` (always 0).
    pub fn constant(dimension: usize, value: bool) -> Self {
        let bias = if value { Rational::zero() } else { -Rational::one() };
        Self::new(vec![Rational::zero(); dimension], bias)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn bias(&self) -> &Rational {
        &self.bias
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// `⟨a,x⟩ + α`.
    pub fn affine(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dimension(x.len())?;
        let mut t = self.bias.clone();
        for (w, v) in self.weights.iter().zip(x) {
            if !w.is_zero() && !v.is_zero() {
                t += w * v;
            }
        }
        Ok(t)
    }

    pub fn affine_bits(&self, x: &[bool]) -> Result<Rational> {
        self.check_dimension(x.len())?;
        let mut t = self.bias.clone();
        for (w, &v) in self.weights.iter().zip(x) {
            if v {
                t += w;
            }
        }
        Ok(t)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<bool> {
        Ok(!self.affine(x)?.is_negative())
    }

    pub fn eval_bits(&self, x: &[bool]) -> Result<bool> {
        Ok(!self.affine_bits(x)?.is_negative())
    }

    fn check_dimension(&self, actual: usize) -> Result<()> {
        if actual != self.weights.len() {
            return Err(CapacityError::DimensionMismatch {
                expected: self.weights.len(),
                actual,
            });
        }
        Ok(())
    }

    /// Integer weights and bias `(c·a, c·α)` for the least positive `c`
    /// clearing all denominators. The sign of the affine form is unchanged.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .weights
            .iter()
            .chain(std::iter::once(&self.bias))
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = |v: &Rational| v.numer() * (&lcm / v.denom());
        (self.weights.iter().map(scale).collect(), scale(&self.bias))
    }
}

impl fmt::Display for ThresholdUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}·x{}", i + 1)?;
        }
        write!(f, " + {})", self.bias)
    }
}

/// A vector of threshold units over a common input space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdMap {
    input_dim: usize,
    units: Vec<ThresholdUnit>,
}

impl ThresholdMap {
    pub fn new(input_dim: usize, units: Vec<ThresholdUnit>) -> Result<Self> {
        for u in &units {
            if u.dimension() != input_dim {
                return Err(CapacityError::DimensionMismatch {
                    expected: input_dim,
                    actual: u.dimension(),
                });
            }
        }
        Ok(Self { input_dim, units })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[ThresholdUnit] {
        &self.units
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<bool>> {
        self.units.iter().map(|u| u.eval(x)).collect()
    }

    pub fn eval_bits(&self, x: &[bool]) -> Result<Vec<bool>> {
        self.units.iter().map(|u| u.eval_bits(x)).collect()
    }
}

/// Layer sizes `(n₁,…,n_L)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Architecture {
    sizes: Vec<usize>,
}

impl Architecture {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(CapacityError::InvalidArchitecture(
                "an architecture needs at least one layer".into(),
            ));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(CapacityError::InvalidArchitecture(format!(
                "layer {} has size 0",
                i + 1
            )));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of layers `L`, counting the input layer.
    pub fn depth(&self) -> usize {
        self.sizes.len()
    }

    pub fn input_size(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// `N = Σ n_k`.
    pub fn nodes(&self) -> u64 {
        self.sizes.iter().map(|&s| s as u64).sum()
    }

    /// `W = Σ n_k n_{k+1}`.
    pub fn connections(&self) -> u64 {
        self.sizes
            .windows(2)
            .map(|w| w[0] as u64 * w[1] as u64)
            .sum()
    }

    /// `P = W + Σ_{k≥2} n_k` (weights plus biases).
    pub fn parameters(&self) -> u64 {
        self.connections() + self.sizes[1..].iter().map(|&s| s as u64).sum::<u64>()
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A feedforward composition of threshold maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredNetwork {
    layers: Vec<ThresholdMap>,
    architecture: Architecture,
}

impl LayeredNetwork {
    pub fn new(layers: Vec<ThresholdMap>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(CapacityError::InvalidArchitecture(
                "a network needs at least one layer map".into(),
            ));
        };
        let mut sizes = vec![first.input_dim()];
        for layer in &layers {
            let expected = *sizes.last().unwrap();
            if layer.input_dim() != expected {
                return Err(CapacityError::DimensionMismatch {
                    expected,
                    actual: layer.input_dim(),
                });
            }
            sizes.push(layer.output_dim());
        }
        let architecture = Architecture::new(sizes)?;
        Ok(Self {
            layers,
            architecture,
        })
    }

    pub fn layers(&self) -> &[ThresholdMap] {
        &self.layers
    }

    pub fn architecture(&self) -> &Architecture {
        &self.architecture
    }

    pub fn input_dim(&self) -> usize {
        self.architecture.input_size()
    }

    pub fn output_dim(&self) -> usize {
        self.architecture.output_size()
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<bool>> {
        let mut bits = self.layers[0].eval(x)?;
        for layer in &self.layers[1..] {
            bits = layer.eval_bits(&bits)?;
        }
        Ok(bits)
    }

    pub fn eval_bits(&self, x: &[bool]) -> Result<Vec<bool>> {
        let mut bits = x.to_vec();
        for layer in &self.layers {
            bits = layer.eval_bits(&bits)?;
        }
        Ok(bits)
    }
}

/// Integer-scaled copy of a network for fast evaluation on bit vectors.
pub(crate) struct CompiledNetwork {
    layers: Vec<Vec<(Vec<i64>, i64)>>,
}

impl CompiledNetwork {
    /// `None` when some scaled coefficient does not fit comfortably in `i64`.
    pub(crate) fn new(net: &LayeredNetwork) -> Option<Self> {
        let limit = BigInt::from(1i64 << 40);
        let mut layers = Vec::with_capacity(net.layers().len());
        for layer in net.layers() {
            let mut units = Vec::with_capacity(layer.output_dim());
            for u in layer.units() {
                let (w, b) = u.integer_form();
                if w.iter().chain(std::iter::once(&b)).any(|v| v.abs() > limit) {
                    return None;
                }
                units.push((
                    w.iter().map(|v| v.to_i64().unwrap()).collect(),
                    b.to_i64().unwrap(),
                ));
            }
            layers.push(units);
        }
        Some(Self { layers })
    }

    pub(crate) fn eval_bits(&self, x: &[bool]) -> Vec<bool> {
        let mut bits = x.to_vec();
        for layer in &self.layers {
            bits = layer
                .iter()
                .map(|(w, b)| {
                    let t: i64 = b + w
                        .iter()
                        .zip(&bits)
                        .filter(|(_, &v)| v)
                        .map(|(w, _)| *w)
                        .sum::<i64>();
                    t >= 0
                })
                .collect();
        }
        bits
    }
}

/// A function `H^n → H^m` stored as output codes in lexicographic input
/// order. Output coordinate 1 is the most significant bit of each code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    input_dim: usize,
    output_dim: usize,
    values: Vec<u64>,
}

impl TruthTable {
    pub fn new(input_dim: usize, output_dim: usize, values: Vec<u64>) -> Result<Self> {
        if input_dim >= 64 || values.len() as u64 != 1u64 << input_dim {
            return Err(CapacityError::DimensionMismatch {
                expected: 1usize.checked_shl(input_dim as u32).unwrap_or(0),
                actual: values.len(),
            });
        }
        if output_dim > 64 || values.iter().any(|&v| output_dim < 64 && v >> output_dim != 0) {
            return Err(CapacityError::NonBoolean {
                what: "truth table output",
            });
        }
        Ok(Self {
            input_dim,
            output_dim,
            values,
        })
    }

    /// Tabulates `f` over `H^n` in lexicographic order.
    pub fn from_fn(input_dim: usize, output_dim: usize, f: impl Fn(&[bool]) -> Vec<bool>) -> Self {
        let values = (0..1u64 << input_dim)
            .map(|code| {
                let out = f(&code_to_bits(code, input_dim));
                assert_eq!(out.len(), output_dim);
                bits_to_code(&out)
            })
            .collect();
        Self {
            input_dim,
            output_dim,
            values,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, x: &[bool]) -> Vec<bool> {
        code_to_bits(self.values[bits_to_code(x) as usize], self.output_dim)
    }
}

/// Truth table of `net` over `H^{n₁}` with the default dimension cap.
pub fn truth_table(net: &LayeredNetwork) -> Result<TruthTable> {
    truth_table_capped(net, DEFAULT_TRUTH_TABLE_CAP)
}

pub fn truth_table_capped(net: &LayeredNetwork, cap: usize) -> Result<TruthTable> {
    let n = net.input_dim();
    if n > cap {
        return Err(CapacityError::CapExceeded {
            what: "truth table input dimension",
            limit: cap,
            actual: n,
        });
    }
    let out = net.output_dim();
    let values = match CompiledNetwork::new(net) {
        Some(compiled) => (0..1u64 << n)
            .map(|code| bits_to_code(&compiled.eval_bits(&code_to_bits(code, n))))
            .collect(),
        None => (0..1u64 << n)
            .map(|code| net.eval_bits(&code_to_bits(code, n)).map(|b| bits_to_code(&b)))
            .collect::<Result<Vec<_>>>()?,
    };
    TruthTable::new(n, out, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::ratio;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn and2() -> ThresholdUnit {
        ThresholdUnit::from_ints(&[2, 2], -3)
    }

    #[test]
    fn and_gate_and_tie_rule() {
        let u = and2();
        assert!(u.eval_bits(&bits("11")).unwrap());
        assert!(!u.eval_bits(&bits("01")).unwrap());
        let zero = ThresholdUnit::from_ints(&[0, 0], 0);
        assert!(zero.eval(&[ratio(5, 3), int(-7)]).unwrap());
    }

    #[test]
    fn equality_unit_example() {
        let u = ThresholdUnit::new(vec![int(1), int(-1)], ratio(-1, 2));
        assert!(u.eval_bits(&bits("10")).unwrap());
        assert!(!u.eval_bits(&bits("11")).unwrap());
        assert!(!u.eval_bits(&bits("00")).unwrap());
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            and2().eval_bits(&bits("1")),
            Err(CapacityError::DimensionMismatch { expected: 2, actual: 1 })
        ));
        let map = ThresholdMap::new(2, vec![and2()]).unwrap();
        let bad = ThresholdMap::new(3, vec![ThresholdUnit::constant(3, true)]).unwrap();
        assert!(LayeredNetwork::new(vec![map.clone(), bad]).is_err());
        let net = LayeredNetwork::new(vec![map]).unwrap();
        assert!(net.eval_bits(&bits("101")).is_err());
    }

    fn xor_net() -> LayeredNetwork {
        let or2 = ThresholdUnit::new(vec![int(1), int(1)], ratio(-1, 2));
        let hidden = ThresholdMap::new(2, vec![and2(), or2]).unwrap();
        // ¬first ∧ second
        let out = ThresholdUnit::new(vec![int(-1), int(1)], ratio(-1, 2));
        LayeredNetwork::new(vec![hidden, ThresholdMap::new(2, vec![out]).unwrap()]).unwrap()
    }

    #[test]
    fn xor_network() {
        let net = xor_net();
        let table = truth_table(&net).unwrap();
        assert_eq!(table.values(), &[0, 1, 1, 0]);
        for code in 0..4u64 {
            let x = code_to_bits(code, 2);
            assert_eq!(net.eval_bits(&x).unwrap(), table.get(&x));
        }
        assert_eq!(net.architecture().sizes(), &[2, 2, 1]);
    }

    #[test]
    fn identity_chain() {
        let id = |n: usize| {
            let units = (0..n)
                .map(|i| {
                    let mut w = vec![int(0); n];
                    w[i] = int(1);
                    ThresholdUnit::new(w, ratio(-1, 2))
                })
                .collect();
            ThresholdMap::new(n, units).unwrap()
        };
        let net = LayeredNetwork::new(vec![id(3), id(3)]).unwrap();
        assert_eq!(net.eval_bits(&bits("101")).unwrap(), bits("101"));
        assert_eq!(truth_table(&net).unwrap().values(), &(0..8).collect::<Vec<u64>>()[..]);
    }

    #[test]
    fn architecture_metrics() {
        let a = Architecture::new(vec![4, 3, 2, 1]).unwrap();
        assert_eq!(a.nodes(), 10);
        assert_eq!(a.connections(), 12 + 6 + 2);
        assert_eq!(a.parameters(), 20 + 6);
        assert!(Architecture::new(vec![2, 0]).is_err());
        assert!(Architecture::new(vec![]).is_err());
    }

    #[test]
    fn truth_table_cap() {
        let map = ThresholdMap::new(21, vec![ThresholdUnit::constant(21, true)]).unwrap();
        let net = LayeredNetwork::new(vec![map]).unwrap();
        assert!(matches!(truth_table(&net), Err(CapacityError::CapExceeded { .. })));
    }

    #[test]
    fn integer_form_preserves_sign() {
        let u = ThresholdUnit::new(vec![ratio(1, 2), ratio(-2, 3)], ratio(1, 6));
        let (w, b) = u.integer_form();
        assert_eq!(w, vec![BigInt::from(3), BigInt::from(-4)]);
        assert_eq!(b, BigInt::from(1));
    }
}
