//! Big-integer binomials, logarithms and exact rank.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // Each prefix product is itself a binomial, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_{k=0}^{upto} C(n, k)`.
pub fn binomial_prefix_sum(n: u64, upto: u64) -> BigUint {
    (0..=upto.min(n)).map(|k| binomial(n, k)).sum()
}

/// `log₂` of a positive big integer as an `f64`.
pub fn log2_biguint(value: &BigUint) -> f64 {
    assert!(!value.is_zero(), "log2 of zero");
    let bits = value.bits();
    if bits <= 64 {
        return value.to_u64().unwrap().to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (value >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

pub fn pow2(exponent: u64) -> BigUint {
    BigUint::one() << exponent
}

/// Smallest `e` with `2^e ≥ m`, i.e. `⌈log₂ m⌉` (0 for `m ≤ 1`).
pub fn ceil_log2(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &p;
                for c in col..width {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Integer `⌊log₂ v⌋` for a positive big integer.
pub fn floor_log2(value: &BigUint) -> u64 {
    value.bits() - 1
}

/// Greatest common divisor of the absolute values, 0 for an all-zero slice.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::int;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(7, 3), BigUint::from(35u32));
        assert_eq!(binomial(3, 7), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_prefix_sum(7, 3), BigUint::from(64u32));
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![BigUint::one()];
        for n in 1..60u64 {
            let mut next = vec![BigUint::one(); n as usize + 1];
            for k in 1..n as usize {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            for k in 0..=n {
                assert_eq!(binomial(n, k), row[k as usize]);
            }
        }
    }

    #[test]
    fn logs() {
        assert!((log2_biguint(&BigUint::from(14u32)) - 14f64.log2()).abs() < 1e-12);
        let big = pow2(200) * 3u32;
        assert!((log2_biguint(&big) - (200.0 + 3f64.log2())).abs() < 1e-9);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&[]), 0);
    }
}
