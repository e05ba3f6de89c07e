//! Chaining three-layer modules behind a shared selector.
//!
//! Module `k` starts reading (a copy of) the first `n̄_k` inputs at hidden
//! layer `k`, so its two hidden layers sit at layers `k` and `k+1` and its
//! gated output at layer `k+2`. The outputs are OR-ed into an accumulator
//! that travels up to the final unit.

use std::collections::BTreeSet;
use std::ops::Range;

use super::{copies, embed, embed_at, logic_unit, numeral, add_clause, LogicKind, VERIFY_CAP};
use crate::combinatorics::ceil_log2;
use crate::error::{CapacityError, Result};
use crate::network::{Architecture, LayeredNetwork, ThresholdMap, ThresholdUnit};
use crate::points::{bits_to_code, code_to_bits, PointSet};

/// Width accounting for one hidden layer of the stacked network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerWidth {
    pub width: usize,
    /// `2 + 2n⁺ + n̄⁺` for the matching target layer.
    pub plus_bound: usize,
    /// `6n` for the matching target layer.
    pub six_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackPlan {
    /// `(n̄_k, h1_k, h2_k, 1)` per module.
    pub module_shapes: Vec<[usize; 4]>,
    /// `L⁻ = ⌈log₂ K⌉` for `K` modules.
    pub selector_bits: usize,
    /// `η(1),…,η(K)`.
    pub codes: Vec<Vec<u8>>,
    /// `P_k` keeps the first `projections[k−1]` inputs.
    pub projections: Vec<usize>,
    /// Filled when a target architecture is given.
    pub widths: Vec<LayerWidth>,
}

impl StackPlan {
    /// Every hidden layer fits under `2 + 2n⁺ + n̄⁺`.
    pub fn within_plus_bound(&self) -> bool {
        self.widths.iter().all(|w| w.width <= w.plus_bound)
    }

    pub fn within_six_bound(&self) -> bool {
        self.widths.iter().all(|w| w.width <= w.six_bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stacked {
    pub network: LayeredNetwork,
    pub plan: StackPlan,
}

#[derive(Default, Clone)]
struct Layout {
    x: Option<Range<usize>>,
    sel: Option<Range<usize>>,
    h1: Option<Range<usize>>,
    h2: Option<Range<usize>>,
    out: Option<usize>,
    acc: Option<usize>,
}

fn module_shape(module: &LayeredNetwork) -> Result<[usize; 4]> {
    match module.architecture().sizes() {
        &[a, b, c, 1] => Ok([a, b, c, 1]),
        other => Err(CapacityError::InvalidArchitecture(format!(
            "stack modules must have shape (n, h1, h2, 1), got {other:?}"
        ))),
    }
}

/// Distinct values of the second hidden layer over `H^n`.
fn hidden_image(module: &LayeredNetwork) -> Result<PointSet> {
    let n = module.input_dim();
    let layers = module.layers();
    let mut seen = BTreeSet::new();
    for code in 0..1u64 << n {
        let y = layers[0].eval_bits(&code_to_bits(code, n))?;
        seen.insert(bits_to_code(&layers[1].eval_bits(&y)?));
    }
    PointSet::from_codes(layers[1].output_dim(), &seen.into_iter().collect::<Vec<_>>())
}

fn push(units: &mut Vec<ThresholdUnit>, new: Vec<ThresholdUnit>) -> Range<usize> {
    let start = units.len();
    units.extend(new);
    start..units.len()
}

/// The network `f(x ⊕ x⁻) = f_1⁺(x ⊕ x⁻) ∨ f_2⁺(P_2 x ⊕ x⁻) ∨ ⋯` with
/// `f_k⁺(x ⊕ x⁻) = f_k(x) ∧ (x⁻ = η(k))`, so that `f(x ⊕ η(k)) = f_k(P_k x)`.
///
/// `target = (n_1, …, n_L)` with `L = K + 3` checks the module shapes
/// against `(n̄_k, n_{k+1}, n_{k+2}, 1)` and fills the width accounting.
pub fn stack(modules: &[LayeredNetwork], target: Option<&[usize]>) -> Result<Stacked> {
    let k_count = modules.len();
    if k_count == 0 {
        return Err(CapacityError::InvalidArchitecture(
            "stacking needs at least one module".into(),
        ));
    }
    let shapes = modules.iter().map(module_shape).collect::<Result<Vec<_>>>()?;
    let inputs: Vec<usize> = shapes.iter().map(|s| s[0]).collect();
    if inputs.windows(2).any(|w| w[1] > w[0]) {
        return Err(CapacityError::InvalidArchitecture(format!(
            "module input sizes must be non-increasing, got {inputs:?}"
        )));
    }
    let q = ceil_log2(k_count as u64) as usize;
    if inputs[0] + q > VERIFY_CAP {
        return Err(CapacityError::CapExceeded {
            what: "stacked network input dimension",
            limit: VERIFY_CAP,
            actual: inputs[0] + q,
        });
    }
    let codes: Vec<Vec<u8>> = (0..k_count).map(|k| numeral(k as u64, q)).collect();
    let depth = k_count + 3;

    let mut widths = Vec::new();
    if let Some(t) = target {
        if t.len() != depth {
            return Err(CapacityError::InvalidArchitecture(format!(
                "{k_count} modules need a target with {depth} layers, got {}",
                t.len()
            )));
        }
        let bar = |k: usize| t[..k].iter().copied().min().unwrap_or(0);
        for (k, s) in shapes.iter().enumerate() {
            let want = [bar(k + 1), t[k + 1], t[k + 2], 1];
            if *s != want {
                return Err(CapacityError::InvalidArchitecture(format!(
                    "module {} has shape {s:?}, target needs {want:?}",
                    k + 1
                )));
            }
        }
        widths = (1..depth)
            .map(|j| LayerWidth {
                width: 0,
                plus_bound: 2 + 2 * (t[j] + q) + bar(j + 1) + q,
                six_bound: 6 * t[j],
            })
            .collect();
    }

    let mut maps = Vec::with_capacity(depth);
    let mut prev = Layout {
        x: Some(0..inputs[0]),
        sel: (q > 0).then(|| inputs[0]..inputs[0] + q),
        ..Layout::default()
    };
    let mut prev_width = inputs[0] + q;
    let or1 = logic_unit(LogicKind::Or, 1)?;
    for j in 1..depth {
        let mut units = Vec::new();
        let mut cur = Layout::default();
        if j < k_count {
            let x = prev.x.clone().expect("x copy is carried while modules remain");
            cur.x = Some(push(&mut units, copies(x.start..x.start + inputs[j], prev_width)));
        }
        if j <= k_count + 1 {
            if let Some(sel) = prev.sel.clone() {
                cur.sel = Some(push(&mut units, copies(sel, prev_width)));
            }
        }
        if j <= k_count {
            let x = prev.x.clone().expect("module input is present");
            let first = &modules[j - 1].layers()[0];
            let new = first.units().iter().map(|u| embed(u, x.start, prev_width)).collect();
            cur.h1 = Some(push(&mut units, new));
        }
        if (2..=k_count + 1).contains(&j) {
            let h1 = prev.h1.clone().expect("first hidden layer precedes the second");
            let second = &modules[j - 2].layers()[1];
            let new = second.units().iter().map(|u| embed(u, h1.start, prev_width)).collect();
            cur.h2 = Some(push(&mut units, new));
        }
        if (3..=k_count + 2).contains(&j) {
            let module = &modules[j - 3];
            let gated = add_clause(&module.layers()[2].units()[0], &codes[j - 3], &hidden_image(module)?)?;
            let mut coords: Vec<usize> = prev.h2.clone().expect("second hidden layer present").collect();
            coords.extend(prev.sel.clone().unwrap_or(0..0));
            cur.out = Some(push(&mut units, vec![embed_at(&gated, &coords, prev_width)]).start);
        }
        let feed: Vec<usize> = prev.acc.into_iter().chain(prev.out).collect();
        if !feed.is_empty() {
            let or = logic_unit(LogicKind::Or, feed.len())?;
            cur.acc = Some(push(&mut units, vec![embed_at(&or, &feed, prev_width)]).start);
        }
        if let Some(w) = widths.get_mut(j - 1) {
            w.width = units.len();
        }
        let width = units.len();
        maps.push(ThresholdMap::new(prev_width, units)?);
        prev = cur;
        prev_width = width;
    }
    let feed: Vec<usize> = prev.acc.into_iter().chain(prev.out).collect();
    let last = match feed.len() {
        1 => embed_at(&or1, &feed, prev_width),
        n => embed_at(&logic_unit(LogicKind::Or, n)?, &feed, prev_width),
    };
    maps.push(ThresholdMap::new(prev_width, vec![last])?);
    let network = LayeredNetwork::new(maps)?;

    // f(x ⊕ η(k)) = f_k(P_k x), and 0 on unused selector codes.
    let n = inputs[0];
    for xc in 0..1u64 << n {
        let x = code_to_bits(xc, n);
        for s in 0..1u64 << q {
            let expected = if (s as usize) < k_count {
                let k = s as usize;
                modules[k].eval_bits(&x[..inputs[k]])?[0]
            } else {
                false
            };
            let mut z = x.clone();
            z.extend(code_to_bits(s, q));
            if network.eval_bits(&z)?[0] != expected {
                return Err(CapacityError::Verification(format!(
                    "stacked network disagrees at input {xc} with selector {s}"
                )));
            }
        }
    }

    let plan = StackPlan {
        module_shapes: shapes,
        selector_bits: q,
        codes,
        projections: inputs,
        widths,
    };
    Ok(Stacked { network, plan })
}

impl Stacked {
    pub fn architecture(&self) -> &Architecture {
        self.network.architecture()
    }
}
