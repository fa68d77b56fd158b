//! Independent reference computations used by the integration tests. Nothing
//! here calls the library's elimination or cycle code.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use surfsing::graph::DualGraph;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn matrix(g: &DualGraph) -> Vec<Vec<Q>> {
    g.intersection_matrix().rows()
}

/// Plain Gaussian elimination with the first nonzero pivot.
pub fn gauss_solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Negative definite iff symmetric elimination of `-M` meets only
/// positive pivots.
pub fn negative_definite(a: &[Vec<Q>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in (k + 1)..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    true
}

pub fn apply(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, v)| p * v).sum())
        .collect()
}

pub fn form(a: &[Vec<Q>], x: &[Q], y: &[Q]) -> Q {
    apply(a, y).iter().zip(x).map(|(p, v)| p * v).sum()
}

/// Discrepancy coefficients of a tree of rational curves: `Δ·C_i = 2 + C_i²`.
pub fn discrepancy(g: &DualGraph) -> Vec<Q> {
    let a = matrix(g);
    let rhs: Vec<Q> = (0..a.len()).map(|i| qi(2) + &a[i][i]).collect();
    gauss_solve(&a, &rhs).expect("negative definite graphs are nonsingular")
}

/// Laufer's sequence in its textbook form, always raising the first
/// violating curve.
pub fn laufer(g: &DualGraph) -> Vec<i64> {
    let a: Vec<Vec<i64>> = matrix(g)
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
        .collect();
    let mut z = vec![1i64; a.len()];
    loop {
        let bad = (0..a.len()).find(|&i| a[i].iter().zip(&z).map(|(p, v)| p * v).sum::<i64>() > 0);
        match bad {
            Some(i) => z[i] += 1,
            None => return z,
        }
    }
}

/// `-(Δ - Z)²`.
pub fn delta_x(g: &DualGraph) -> Q {
    let a = matrix(g);
    let diff: Vec<Q> = discrepancy(g)
        .into_iter()
        .zip(laufer(g))
        .map(|(d, z)| d - qi(z))
        .collect();
    -form(&a, &diff, &diff)
}

/// Exhaustive search over `0..=bound` coefficients for nonzero cycles
/// `Z` with `Z·C_i <= 0` for all `i`. Returns the one with smallest total
/// and the componentwise minimum of all of them.
pub fn brute_force_fundamental_cycle(g: &DualGraph, bound: i64) -> Option<(Vec<i64>, Vec<i64>)> {
    let a: Vec<Vec<i64>> = matrix(g)
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
        .collect();
    let n = a.len();
    let mut z = vec![0i64; n];
    let mut best: Option<Vec<i64>> = None;
    let mut meet: Option<Vec<i64>> = None;
    loop {
        let mut i = 0;
        while i < n && z[i] == bound {
            z[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        z[i] += 1;
        let anti_nef = a
            .iter()
            .all(|row| row.iter().zip(&z).map(|(p, v)| p * v).sum::<i64>() <= 0);
        if !anti_nef {
            continue;
        }
        let total: i64 = z.iter().sum();
        if best.as_ref().is_none_or(|b| total < b.iter().sum()) {
            best = Some(z.clone());
        }
        meet = Some(match meet {
            None => z.clone(),
            Some(m) => m.iter().zip(&z).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    best.zip(meet)
}
