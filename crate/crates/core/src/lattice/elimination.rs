//! Fraction-free integer elimination.
//!
//! Both routines run over machine integers with checked arithmetic and are
//! re-run over a wider type (`i64`, then `i128`, then `BigInt`) whenever an
//! intermediate value overflows, so results are always exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Ring: Clone {
    fn from_big(value: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
}

impl Ring for i128 {
    fn from_big(value: &BigInt) -> Option<Self> {
        value.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self % other, 0, "inexact fraction-free division");
        self.checked_div(*other)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
}

impl Ring for i64 {
    fn from_big(value: &BigInt) -> Option<Self> {
        value.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self % other, 0, "inexact fraction-free division");
        self.checked_div(*other)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
}

impl Ring for BigInt {
    fn from_big(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        <BigInt as One>::one()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "inexact fraction-free division");
        Some(q)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
}

fn convert<R: Ring>(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<R>>> {
    rows.iter()
        .map(|row| row.iter().map(R::from_big).collect())
        .collect()
}

/// Bareiss elimination without pivoting. Returns `Some(true)` iff every
/// leading principal minor is positive; `None` on overflow.
fn leading_minors_positive<R: Ring>(mut a: Vec<Vec<R>>) -> Option<bool> {
    let n = a.len();
    let mut prev = R::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_positive() {
            return Some(false);
        }
        for i in (k + 1)..n {
            let factor = a[i][k].clone();
            for j in (k + 1)..n {
                let lhs = pivot.mul(&a[i][j])?;
                let rhs = factor.mul(&a[k][j])?;
                a[i][j] = lhs.sub(&rhs)?.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    Some(true)
}

/// Positive-definiteness of a symmetric integer matrix via the signs of its
/// leading principal minors.
pub(crate) fn is_positive_definite(rows: &[Vec<BigInt>]) -> bool {
    if let Some(answer) = convert::<i64>(rows).and_then(leading_minors_positive) {
        return answer;
    }
    if let Some(small) = convert::<i128>(rows) {
        if let Some(answer) = leading_minors_positive(small) {
            return answer;
        }
    }
    leading_minors_positive(rows.to_vec()).expect("bigint arithmetic cannot overflow")
}

/// As [`is_positive_definite`], starting from machine integers.
pub(crate) fn is_positive_definite_small(rows: Vec<Vec<i64>>) -> bool {
    if let Some(answer) = leading_minors_positive(rows.clone()) {
        return answer;
    }
    if let Some(answer) = leading_minors_positive(widen::<i128>(&rows)) {
        return answer;
    }
    leading_minors_positive(widen::<BigInt>(&rows)).expect("bigint arithmetic cannot overflow")
}

fn widen<R: Ring>(rows: &[Vec<i64>]) -> Vec<Vec<R>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| R::from_big(&BigInt::from(x)).expect("i64 fits every ring"))
                .collect()
        })
        .collect()
}

/// Result of a fraction-free solve: `x_i = numerators[i] / denominator`.
pub(crate) enum Solution {
    Solved {
        numerators: Vec<BigInt>,
        denominator: BigInt,
    },
    Singular,
}

/// Fraction-free Gauss-Jordan elimination on the augmented matrix `[A | b]`
/// with partial pivoting on absolute value (ties go to the lowest row).
/// Every intermediate entry is a minor of the input, so each division by the
/// previous pivot is exact.
fn gauss_jordan<R: Ring>(mut a: Vec<Vec<R>>) -> Option<Solution> {
    let n = a.len();
    let mut prev = R::one();
    for k in 0..n {
        let mut best = k;
        for r in (k + 1)..n {
            if a[r][k].cmp_abs(&a[best][k]) == Ordering::Greater {
                best = r;
            }
        }
        if a[best][k].is_zero() {
            return Some(Solution::Singular);
        }
        a.swap(k, best);
        let pivot = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = a[i][k].clone();
            for j in (k + 1)..=n {
                let lhs = pivot.mul(&a[i][j])?;
                let rhs = factor.mul(&a[k][j])?;
                a[i][j] = lhs.sub(&rhs)?.div_exact(&prev)?;
            }
            a[i][k] = R::zero();
        }
        prev = pivot;
    }
    // All diagonal entries now equal the last pivot.
    Some(Solution::Solved {
        numerators: a.iter().map(|row| row[n].to_big()).collect(),
        denominator: prev.to_big(),
    })
}

/// Solves an integer system given as augmented rows `[A | b]`.
pub(crate) fn solve_augmented(rows: &[Vec<BigInt>]) -> Solution {
    if let Some(solution) = convert::<i64>(rows).and_then(gauss_jordan) {
        return solution;
    }
    if let Some(small) = convert::<i128>(rows) {
        if let Some(solution) = gauss_jordan(small) {
            return solution;
        }
    }
    gauss_jordan(rows.to_vec()).expect("bigint arithmetic cannot overflow")
}

/// As [`solve_augmented`], starting from machine integers.
pub(crate) fn solve_augmented_small(rows: Vec<Vec<i64>>) -> Solution {
    gauss_jordan(rows.clone())
        .or_else(|| gauss_jordan(widen::<i128>(&rows)))
        .unwrap_or_else(|| gauss_jordan(widen::<BigInt>(&rows)).expect("bigint arithmetic cannot overflow"))
}
