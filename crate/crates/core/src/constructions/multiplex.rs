//! Routing `m` threshold functions through one output with selector bits.

use super::{add_clause, embed, logic_unit, numeral, with_selector, LogicKind, VERIFY_CAP};
use crate::combinatorics::ceil_log2;
use crate::error::{CapacityError, Result};
use crate::network::{LayeredNetwork, ThresholdMap, ThresholdUnit};
use crate::points::{bits_to_code, PointSet};

/// `σ(i)` for 1-based `i`: the big-endian code of `i − 1` in `width` bits.
pub fn selector_code(i: usize, width: usize) -> Vec<u8> {
    numeral(i as u64 - 1, width)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplexPlan {
    pub m: usize,
    /// `m⁻ = ⌈log₂ m⌉` selector bits.
    pub m_minus: usize,
    /// `σ(1),…,σ(m)`.
    pub codes: Vec<Vec<u8>>,
}

impl MultiplexPlan {
    pub fn new(m: usize) -> Self {
        let m_minus = ceil_log2(m as u64) as usize;
        Self {
            m,
            m_minus,
            codes: (1..=m).map(|i| selector_code(i, m_minus)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multiplexed {
    /// Architecture `(n + m⁻, m, 1)`.
    pub network: LayeredNetwork,
    pub plan: MultiplexPlan,
}

/// `f⁺(x ⊕ x⁻) = OR_i (f_i(x) ∧ x⁻ = σ(i))`, so `f⁺(x ⊕ σ(i)) = f_i(x)` on
/// `domain` and `f⁺ = 0` on unused selector codes. Verified exhaustively on
/// `domain ⊕ H^{m⁻}`.
pub fn multiplex(functions: &[ThresholdUnit], domain: &PointSet) -> Result<Multiplexed> {
    let m = functions.len();
    if m == 0 {
        return Err(CapacityError::InvalidArchitecture(
            "multiplexing needs at least one function".into(),
        ));
    }
    let plan = MultiplexPlan::new(m);
    let hidden = functions
        .iter()
        .zip(&plan.codes)
        .map(|(f, code)| add_clause(f, code, domain))
        .collect::<Result<Vec<_>>>()?;
    let width = domain.dimension() + plan.m_minus;
    let output = logic_unit(LogicKind::Or, m)?;
    let network = LayeredNetwork::new(vec![
        ThresholdMap::new(width, hidden)?,
        ThresholdMap::new(m, vec![embed(&output, 0, m)])?,
    ])?;

    let extended = with_selector(domain, plan.m_minus);
    if extended.len() > 1 << VERIFY_CAP {
        return Err(CapacityError::CapExceeded {
            what: "multiplex verification domain size",
            limit: 1 << VERIFY_CAP,
            actual: extended.len(),
        });
    }
    let selectors = 1usize << plan.m_minus;
    for (idx, z) in extended.points().iter().enumerate() {
        let (x_index, sel) = (idx / selectors, (idx % selectors) as u64);
        let x = domain.point(x_index);
        let expected = match plan.codes.iter().position(|c| {
            bits_to_code(&c.iter().map(|&b| b == 1).collect::<Vec<_>>()) == sel
        }) {
            Some(i) => functions[i].eval(x)?,
            None => false,
        };
        if network.eval(z)? != [expected] {
            return Err(CapacityError::Verification(format!(
                "multiplexed network disagrees at point {x_index} with selector {sel}"
            )));
        }
    }
    Ok(Multiplexed { network, plan })
}
