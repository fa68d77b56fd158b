//! Exact rational linear algebra over a finite curve lattice.
//!
//! Everything here is exact: rationals carry arbitrary-precision numerators
//! and denominators, and elimination is done fraction-free over the integers
//! after clearing denominators row by row.

mod elimination;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for `n / d`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Reads a JSON integer or a rational string such as `"3/4"`.
pub fn rational_from_json(value: &serde_json::Value) -> Result<Rational> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(integer(n.as_i64().unwrap_or_default())),
        other => Err(Error::InvalidRational(other.to_string())),
    }
}

/// A coordinate vector indexed by curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![Rational::zero(); n])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        values.iter().map(|&v| integer(v)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Vector {
        self.0.iter().map(|a| a * factor).collect()
    }

    /// Euclidean dot product (no intersection form).
    pub fn dot(&self, other: &Vector) -> Result<Rational> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl FromIterator<Rational> for Vector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Symmetric intersection form on `n` curves. Off-diagonal entries are
/// non-negative because distinct prime divisors meet non-negatively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl IntersectionMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        let m = IntersectionMatrix { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
                if m.get(i, j).is_negative() {
                    return Err(Error::NegativeOffDiagonal(i, j));
                }
            }
        }
        Ok(m)
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| integer(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Restriction of the form to the given curves, in the given order.
    pub fn principal(&self, indices: &[usize]) -> IntersectionMatrix {
        let entries = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        IntersectionMatrix {
            n: indices.len(),
            entries,
        }
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `M x`: the vector of pairings `x · C_i`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        Ok((0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .filter(|(m, v)| !m.is_zero() && !v.is_zero())
                    .map(|(m, v)| m * v)
                    .sum()
            })
            .collect())
    }

    /// The intersection product `uᵀ M v`.
    pub fn pairing(&self, u: &Vector, v: &Vector) -> Result<Rational> {
        self.check_dim(u)?;
        self.apply(v)?.dot(u)
    }

    /// Square `uᵀ M u`.
    pub fn self_intersection(&self, u: &Vector) -> Result<Rational> {
        self.pairing(u, u)
    }

    /// True iff every leading principal minor of `-M` is positive.
    pub fn is_negative_definite(&self) -> bool {
        let rows: Vec<Vec<BigInt>> = (0..self.n)
            .map(|i| {
                let negated: Vec<Rational> = self.row(i).iter().map(|x| -x).collect();
                clear_denominators(&negated)
            })
            .collect();
        elimination::is_positive_definite(&rows)
    }

    /// Exact solution of `M x = b`.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        self.check_dim(b)?;
        let rows: Vec<Vec<BigInt>> = (0..self.n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                clear_denominators(&row)
            })
            .collect();
        match elimination::solve_augmented(&rows) {
            elimination::Solution::Singular => Err(Error::Singular),
            elimination::Solution::Solved {
                numerators,
                denominator,
            } => Ok(numerators
                .into_iter()
                .map(|num| Rational::new(num, denominator.clone()))
                .collect()),
        }
    }
}

/// [`IntersectionMatrix::is_negative_definite`] for an integer matrix.
pub(crate) fn integer_is_negative_definite(m: &[Vec<i64>]) -> bool {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|&x| -x).collect())
        .collect();
    elimination::is_positive_definite_small(rows)
}

/// Solves `M x = b` over the integers, returning numerators and a positive
/// common denominator, or `None` when `M` is singular.
pub(crate) fn integer_solve(m: &[Vec<i64>], b: &[i64]) -> Option<(Vec<BigInt>, BigInt)> {
    let rows = m
        .iter()
        .zip(b)
        .map(|(r, &bi)| r.iter().chain(std::iter::once(&bi)).copied().collect())
        .collect();
    match elimination::solve_augmented_small(rows) {
        elimination::Solution::Singular => None,
        elimination::Solution::Solved {
            numerators,
            denominator,
        } => {
            if denominator.is_negative() {
                Some((numerators.into_iter().map(|x| -x).collect(), -denominator))
            } else {
                Some((numerators, denominator))
            }
        }
    }
}

/// Multiplies a row by the (positive) lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Free-function form of [`IntersectionMatrix::pairing`].
pub fn pairing(u: &Vector, v: &Vector, m: &IntersectionMatrix) -> Result<Rational> {
    m.pairing(u, v)
}

/// Free-function form of [`IntersectionMatrix::is_negative_definite`].
pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    m.is_negative_definite()
}

/// Free-function form of [`IntersectionMatrix::solve`].
pub fn solve(m: &IntersectionMatrix, b: &Vector) -> Result<Vector> {
    m.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntersectionMatrix {
        IntersectionMatrix::from_integers(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let single = m(&[&[-2]]);
        let one = Vector::from_integers(&[1]);
        assert_eq!(single.pairing(&one, &one).unwrap(), integer(-2));

        let a3 = m(&[&[-2, 1, 0], &[1, -3, 1], &[0, 1, -2]]);
        let zero = Vector::zeros(3);
        let v = Vector::from_integers(&[4, -1, 7]);
        assert!(a3.pairing(&zero, &v).unwrap().is_zero());
        assert!(a3.pairing(&v, &zero).unwrap().is_zero());
    }

    #[test]
    fn pairing_dimension_mismatch() {
        let a2 = m(&[&[-2, 1], &[1, -2]]);
        let err = a2
            .pairing(&Vector::zeros(2), &Vector::zeros(3))
            .unwrap_err();
        assert_eq!(err.code(), "dimension-mismatch");
        assert!(a2.solve(&Vector::zeros(1)).is_err());
    }

    #[test]
    fn negative_definite_examples() {
        assert!(m(&[&[-2]]).is_negative_definite());
        assert!(m(&[&[-2, 1], &[1, -2]]).is_negative_definite());
        assert!(!m(&[&[-2, 2], &[2, -2]]).is_negative_definite());
        assert!(!m(&[&[0]]).is_negative_definite());
        assert!(!m(&[&[-1, 1], &[1, 0]]).is_negative_definite());
        // affine A_2 cycle is only semi-definite
        assert!(!m(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, -2]]).is_negative_definite());
    }

    #[test]
    fn solve_examples() {
        let x = m(&[&[-2]]).solve(&Vector::zeros(1)).unwrap();
        assert_eq!(x, Vector::zeros(1));

        let x = m(&[&[-3, 1], &[1, -3]])
            .solve(&Vector::from_integers(&[-1, -1]))
            .unwrap();
        assert_eq!(x, Vector::new(vec![rational(1, 2), rational(1, 2)]));

        for w in 2..20 {
            let x = m(&[&[-w]]).solve(&Vector::from_integers(&[2 - w])).unwrap();
            assert_eq!(x[0], rational(w - 2, w));
        }
    }

    #[test]
    fn solve_singular() {
        let err = m(&[&[-2, 2], &[2, -2]])
            .solve(&Vector::from_integers(&[1, 0]))
            .unwrap_err();
        assert_eq!(err, Error::Singular);
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(
            IntersectionMatrix::from_integers(&[vec![-2, 1], vec![0, -2]]).unwrap_err(),
            Error::NotSymmetric(0, 1)
        );
        assert_eq!(
            IntersectionMatrix::from_integers(&[vec![-2, -1], vec![-1, -2]]).unwrap_err(),
            Error::NegativeOffDiagonal(0, 1)
        );
        assert_eq!(
            IntersectionMatrix::from_integers(&[vec![-2, 1]]).unwrap_err(),
            Error::NotSquare
        );
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("33/23").unwrap(), rational(33, 23));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rational(-2, 3));
        assert_eq!(parse_rational("5").unwrap(), integer(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational(6, -4).to_string(), "-3/2");
        assert_eq!(rational(4, 2).to_string(), "2");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rational(n, d))
    }

    fn rational_matrix(n: usize) -> impl Strategy<Value = IntersectionMatrix> {
        (
            proptest::collection::vec(small_rational(), n),
            proptest::collection::vec((0i64..=6, 1i64..=3), n * n),
        )
            .prop_map(move |(diag, off)| {
                let mut rows = vec![vec![Rational::zero(); n]; n];
                for i in 0..n {
                    rows[i][i] = diag[i].clone();
                    for j in (i + 1)..n {
                        let (p, q) = off[i * n + j];
                        rows[i][j] = rational(p, q);
                        rows[j][i] = rational(p, q);
                    }
                }
                IntersectionMatrix::new(rows).unwrap()
            })
    }

    /// Determinant by the permutation expansion.
    fn leibniz(a: &[Vec<Rational>]) -> Rational {
        fn go(a: &[Vec<Rational>], row: usize, used: &mut Vec<bool>, sign: bool) -> Rational {
            if row == a.len() {
                return if sign { -Rational::one() } else { Rational::one() };
            }
            let mut total = Rational::zero();
            let mut flips = 0;
            for col in 0..a.len() {
                if used[col] {
                    continue;
                }
                if !a[row][col].is_zero() {
                    used[col] = true;
                    let rest = go(a, row + 1, used, sign ^ (flips % 2 == 1));
                    total += &a[row][col] * rest;
                    used[col] = false;
                }
                flips += 1;
            }
            total
        }
        go(a, 0, &mut vec![false; a.len()], false)
    }

    /// Negative definite iff every principal minor of `-M` is positive.
    fn all_principal_minors(mat: &IntersectionMatrix) -> bool {
        let n = mat.dim();
        (1u32..(1 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let sub: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| -mat.get(i, j).clone()).collect())
                .collect();
            leibniz(&sub) > Rational::zero()
        })
    }

    #[test]
    fn leibniz_oracle_sanity() {
        let a3 = m(&[&[-2, 1, 0], &[1, -2, 1], &[0, 1, -2]]);
        assert_eq!(leibniz(&a3.rows()), integer(-4));
        assert_eq!(leibniz(&m(&[&[0, 1], &[1, 0]]).rows()), integer(-1));
    }

    proptest! {
        #[test]
        fn solve_has_zero_residual(
            mat in (1usize..=6).prop_flat_map(rational_matrix),
            seed in proptest::collection::vec(small_rational(), 6),
        ) {
            let b: Vector = seed[..mat.dim()].iter().cloned().collect();
            match mat.solve(&b) {
                Ok(x) => prop_assert_eq!(mat.apply(&x).unwrap(), b),
                Err(e) => prop_assert_eq!(e, Error::Singular),
            }
        }

        #[test]
        fn definiteness_matches_principal_minors(mat in (1usize..=6).prop_flat_map(rational_matrix)) {
            prop_assert_eq!(mat.is_negative_definite(), all_principal_minors(&mat));
        }

        #[test]
        fn singular_exactly_when_determinant_vanishes(mat in (1usize..=5).prop_flat_map(rational_matrix)) {
            let b = Vector::zeros(mat.dim());
            prop_assert_eq!(mat.solve(&b).is_err(), leibniz(&mat.rows()).is_zero());
        }

        #[test]
        fn pairing_is_symmetric_and_bilinear(
            mat in rational_matrix(4),
            u in proptest::collection::vec(small_rational(), 4),
            v in proptest::collection::vec(small_rational(), 4),
            w in proptest::collection::vec(small_rational(), 4),
            s in small_rational(),
        ) {
            let (u, v, w) = (Vector::new(u), Vector::new(v), Vector::new(w));
            prop_assert_eq!(mat.pairing(&u, &v).unwrap(), mat.pairing(&v, &u).unwrap());
            let lhs = mat.pairing(&u.scale(&s).add(&w).unwrap(), &v).unwrap();
            let rhs = &s * mat.pairing(&u, &v).unwrap() + mat.pairing(&w, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
