//! Injective threshold maps `H^n → H^m` with rich images.

use std::collections::HashSet;

use num_rational::BigRational;

use super::{copies, embed, exponential_map, VERIFY_CAP};
use crate::error::{CapacityError, Result};
use crate::network::{ThresholdMap, ThresholdUnit};
use crate::points::{bits_to_code, code_to_bits, Rational};

/// Block length `k` and sizes `n0`, `m0` with `n0/k = m0/2^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceParameters {
    pub k: usize,
    pub n0: usize,
    pub m0: usize,
    /// Bisection estimate of the root of `2^x/x = m/(2n)` on `[2, n/2]`.
    pub x: Rational,
}

fn ratio_at(x: f64) -> f64 {
    x.exp2() / x
}

/// Chooses `k = ⌊x⌋` where `n/x = (m/2)/2^x`, then `n0 = ⌊n/k⌋·k` and
/// `m0 = ⌊n/k⌋·2^k`, so that `n0 ∈ [n/2, n]`, `m0 ∈ [m/8, m/2]` and
/// `k ∈ [2, n/2]`.
pub fn balance_parameters(n: usize, m: usize) -> Result<BalanceParameters> {
    if n < 4 || m < 4 * n {
        return Err(CapacityError::Hypotheses(format!(
            "balancing needs n ≥ 4 and m ≥ 4n, got n = {n}, m = {m}"
        )));
    }
    let target = m as f64 / (2 * n) as f64;
    let (mut lo, mut hi) = (2.0f64, n as f64 / 2.0);
    if ratio_at(hi) >= target {
        while hi - lo >= 2f64.powi(-30) {
            let mid = (lo + hi) / 2.0;
            if ratio_at(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        lo = hi;
    }
    let x = BigRational::from_float(lo).expect("finite bisection estimate");

    // k is the largest integer in [2, n/2] with 2^k/k ≤ m/(2n), decided
    // exactly: 2^k · 2n ≤ m · k.
    let fits = |k: usize| k < 64 && (1u128 << k) * (2 * n) as u128 <= (m * k) as u128;
    let mut k = 2;
    while k < n / 2 && fits(k + 1) {
        k += 1;
    }
    let blocks = n / k;
    let (n0, m0) = (blocks * k, blocks << k);
    let ok = (2..=n / 2).contains(&k)
        && 2 * n0 >= n
        && n0 <= n
        && 8 * m0 >= m
        && 2 * m0 <= m
        && n0 << k == m0 * k;
    if !ok {
        return Err(CapacityError::Hypotheses(format!(
            "no balanced block length for n = {n}, m = {m} (k = {k}, n0 = {n0}, m0 = {m0})"
        )));
    }
    Ok(BalanceParameters { k, n0, m0, x })
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnrichmentKind {
    /// `n·2^k = m·k` with `k | n`: the exponential map on every block.
    Balanced { k: usize },
    /// `m ≤ 4n`: identity followed by zero outputs.
    Identity,
    /// Exponential blocks on the first `n0` inputs, the remaining inputs
    /// copied, zeros after.
    General(BalanceParameters),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enrichment {
    pub map: ThresholdMap,
    pub kind: EnrichmentKind,
    /// `None` when `n` exceeds the verification cap.
    pub injective: Option<bool>,
}

fn zero_unit(width: usize) -> ThresholdUnit {
    ThresholdUnit::constant(width, false)
}

/// Exponential maps on consecutive `k`-blocks of the first `blocks·k`
/// inputs of an `n`-dimensional layer.
fn block_units(k: usize, blocks: usize, n: usize) -> Result<Vec<ThresholdUnit>> {
    let f = exponential_map(k)?;
    let mut units = Vec::with_capacity(blocks << k);
    for b in 0..blocks {
        units.extend(f.units().iter().map(|u| embed(u, b * k, n)));
    }
    Ok(units)
}

fn balanced_block(n: usize, m: usize) -> Option<usize> {
    (2..=n / 2).find(|&k| k < 64 && n % k == 0 && (n as u128) << k == (m * k) as u128)
}

/// An injective threshold map `H^n → H^m`.
pub fn enrichment_map(n: usize, m: usize) -> Result<Enrichment> {
    if n == 0 || m < n {
        return Err(CapacityError::Hypotheses(format!(
            "enrichment needs 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    let (units, kind) = if let Some(k) = balanced_block(n, m) {
        (block_units(k, n / k, n)?, EnrichmentKind::Balanced { k })
    } else if m <= 4 * n {
        let mut units = copies(0..n, n);
        units.extend((n..m).map(|_| zero_unit(n)));
        (units, EnrichmentKind::Identity)
    } else {
        if n >= 128 || (m as u128) > 1u128 << (n / 2) {
            return Err(CapacityError::Hypotheses(format!(
                "enrichment needs m ≤ 2^(n/2), got n = {n}, m = {m}"
            )));
        }
        let p = balance_parameters(n, m)?;
        let mut units = block_units(p.k, p.n0 / p.k, n)?;
        units.extend(copies(p.n0..n, n));
        let used = units.len();
        units.extend((used..m).map(|_| zero_unit(n)));
        (units, EnrichmentKind::General(p))
    };
    let map = ThresholdMap::new(n, units)?;
    let injective = if n <= VERIFY_CAP.min(16) && m <= 64 {
        let mut seen = HashSet::new();
        let mut ok = true;
        for code in 0..1u64 << n {
            let y = map.eval_bits(&code_to_bits(code, n))?;
            ok &= seen.insert(bits_to_code(&y));
        }
        Some(ok)
    } else {
        None
    };
    if injective == Some(false) {
        return Err(CapacityError::Verification(format!(
            "enrichment map H^{n} → H^{m} is not injective"
        )));
    }
    Ok(Enrichment {
        map,
        kind,
        injective,
    })
}
