//! Exact feasibility of an open polyhedral cone.
//!
//! Given integer vectors `z_1,…,z_m ∈ ℤ^d` we decide whether some `w` has
//! `⟨z_i, w⟩ > 0` for every `i`. By Gordan's alternative this fails exactly
//! when `0` is a convex combination of the `z_i`, which is a phase-1 linear
//! program:
//!
//! ```text
//! find λ ≥ 0 with Σ λ_i z_i = 0 and Σ λ_i = 1.
//! ```
//!
//! The program is solved with a fraction-free (integer-preserving) simplex
//! tableau and Bland's rule, so it terminates and never rounds. When the
//! artificial cost stays positive the phase-1 duals give `w` directly.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Integer arithmetic used by the tableau. `None` signals overflow.
trait TableauInt: Clone + Ord {
    fn from_i64(v: i64) -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn div_exact(&self, other: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
}

impl TableauInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        i128::try_from(v).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl TableauInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!((self % other).is_zero());
        self / other
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Outcome of [`open_cone_point`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeFeasibility {
    /// `w` with `⟨z_i, w⟩ > 0` for all `i`.
    Interior(Vec<BigInt>),
    /// Convex weights `λ` (as `numerators / denominator`) with `Σ λ_i z_i = 0`.
    Empty {
        numerators: Vec<BigInt>,
        denominator: BigInt,
    },
}

/// Decides whether `{w : ⟨z_i,w⟩ > 0 ∀i}` is nonempty. Every returned
/// certificate has been checked exactly.
///
/// # Panics
///
/// If the rows have differing lengths.
pub fn open_cone_point(rows: &[Vec<BigInt>]) -> ConeFeasibility {
    let d = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == d), "ragged cone generators");
    if rows.is_empty() {
        return ConeFeasibility::Interior(vec![BigInt::zero(); d]);
    }
    let result = solve::<i128>(rows, d).unwrap_or_else(|| {
        solve::<BigInt>(rows, d).expect("big-integer tableau cannot overflow")
    });
    check(rows, &result);
    result
}

fn check(rows: &[Vec<BigInt>], result: &ConeFeasibility) {
    match result {
        ConeFeasibility::Interior(w) => {
            for z in rows {
                let dot: BigInt = z.iter().zip(w).map(|(a, b)| a * b).sum();
                assert!(dot.is_positive(), "simplex produced an invalid interior point");
            }
        }
        ConeFeasibility::Empty {
            numerators,
            denominator,
        } => {
            assert!(denominator.is_positive());
            assert!(numerators.iter().all(|l| !l.is_negative()));
            let total: BigInt = numerators.iter().sum();
            assert_eq!(&total, denominator, "convex weights do not sum to one");
            for c in 0..rows[0].len() {
                let s: BigInt = rows.iter().zip(numerators).map(|(z, l)| &z[c] * l).sum();
                assert!(s.is_zero(), "convex combination is not zero");
            }
        }
    }
}

/// Phase-1 simplex. Returns `None` on overflow of `T`.
fn solve<T: TableauInt>(rows: &[Vec<BigInt>], d: usize) -> Option<ConeFeasibility> {
    let m = rows.len();
    // Constraint rows 0..d are Σ λ_i z_i[r] = 0, row d is Σ λ_i = 1.
    // Columns: λ_0..λ_{m-1}, artificial_0..artificial_d, then the rhs.
    let nrows = d + 1;
    let ncols = m + nrows;
    let rhs = ncols;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(nrows + 1);
    for r in 0..nrows {
        let mut row = Vec::with_capacity(ncols + 1);
        for z in rows {
            row.push(if r < d { T::from_big(&z[r])? } else { T::from_i64(1) });
        }
        for a in 0..nrows {
            row.push(T::from_i64(i64::from(a == r)));
        }
        row.push(T::from_i64(i64::from(r == d)));
        tab.push(row);
    }
    // Reduced costs of the artificial objective: minus the column sums.
    let mut obj = Vec::with_capacity(ncols + 1);
    for j in 0..m {
        let mut s = T::from_i64(0);
        for row in tab.iter().take(nrows) {
            s = s.sub(&row[j])?;
        }
        obj.push(s);
    }
    obj.extend((0..nrows).map(|_| T::from_i64(0)));
    obj.push(T::from_i64(-1));
    tab.push(obj);

    let mut basis: Vec<usize> = (m..ncols).collect();
    let mut det = T::from_i64(1);

    loop {
        let Some(q) = (0..ncols).find(|&j| tab[nrows][j].is_neg()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..nrows {
            if !tab[i][q].is_pos() {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(k) => {
                    // Compare rhs_i / a_iq against rhs_k / a_kq.
                    let lhs = tab[i][rhs].mul(&tab[k][q])?;
                    let rhs_k = tab[k][rhs].mul(&tab[i][q])?;
                    if lhs < rhs_k || (lhs == rhs_k && basis[i] < basis[k]) {
                        i
                    } else {
                        k
                    }
                }
            });
        }
        // The phase-1 objective is bounded below by zero.
        let p = leave.expect("phase-1 objective cannot be unbounded");
        let pivot = tab[p][q].clone();
        for i in 0..=nrows {
            if i == p {
                continue;
            }
            let factor = tab[i][q].clone();
            for j in 0..=ncols {
                let v = pivot.mul(&tab[i][j])?.sub(&factor.mul(&tab[p][j])?)?;
                tab[i][j] = v.div_exact(&det);
            }
        }
        det = pivot;
        basis[p] = q;
    }

    if !tab[nrows][rhs].is_neg() {
        // Objective reached zero: λ is a convex combination hitting 0.
        let denominator = det.to_big();
        let mut numerators = vec![BigInt::zero(); m];
        for (i, &b) in basis.iter().enumerate() {
            if b < m {
                numerators[b] = tab[i][rhs].to_big();
            }
        }
        return Some(ConeFeasibility::Empty {
            numerators,
            denominator,
        });
    }

    // Duals y_r = 1 − reduced_cost(artificial_r); the separator is −y.
    let det_big = det.to_big();
    let w: Vec<BigInt> = (0..d).map(|r| tab[nrows][m + r].to_big() - &det_big).collect();
    let margin = &det_big - tab[nrows][m + d].to_big();
    debug_assert!(margin.is_positive());
    Some(ConeFeasibility::Interior(w))
}
