//! Zariski decomposition relative to a declared, finite set of curves.
//!
//! A true Zariski decomposition quantifies over every curve on the surface.
//! Here nefness and the negative part are only ever tested against the curves
//! of a [`CurveLattice`], so results are decompositions *relative to the
//! declared curves*.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{IntersectionMatrix, Rational, Vector};

/// Curve classes with an exact symmetric intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveLattice {
    ids: Vec<String>,
    matrix: IntersectionMatrix,
}

impl CurveLattice {
    pub fn new(ids: Vec<String>, matrix: IntersectionMatrix) -> Result<Self> {
        if ids.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: ids.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        Ok(CurveLattice { ids, matrix })
    }

    pub fn from_integers(ids: &[&str], rows: &[Vec<i64>]) -> Result<Self> {
        let ids = ids.iter().map(|s| s.to_string()).collect();
        CurveLattice::new(ids, IntersectionMatrix::from_integers(rows)?)
    }

    /// Reads `{"ids": [...], "matrix": [[...], ...]}`; entries may be JSON
    /// integers or strings such as `"-3/2"`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidInput(format!("curve lattice: {what}"));
        let ids = value
            .get("ids")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"ids\" array"))?
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad("ids must be strings")))
            .collect::<Result<Vec<_>>>()?;
        let rows = value
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"matrix\" array"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("matrix rows must be arrays"))?
                    .iter()
                    .map(crate::lattice::rational_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CurveLattice::new(ids, IntersectionMatrix::new(rows)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        CurveLattice::from_json(&value)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn matrix(&self) -> &IntersectionMatrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    fn names(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.ids[i].clone()).collect()
    }
}

/// A divisor class, given either by coefficients over the lattice or only
/// through its pairings with the declared curves (plus `D²` when known).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisor {
    Coefficients(Vector),
    Functional {
        pairings: Vector,
        self_intersection: Option<Rational>,
    },
}

impl Divisor {
    pub fn functional(pairings: Vector, self_intersection: Option<Rational>) -> Self {
        Divisor::Functional {
            pairings,
            self_intersection,
        }
    }

    /// `D·C_i` for every declared curve.
    pub fn pairings(&self, lattice: &CurveLattice) -> Result<Vector> {
        let v = match self {
            Divisor::Coefficients(c) => lattice.matrix.apply(c)?,
            Divisor::Functional { pairings, .. } => pairings.clone(),
        };
        if v.len() != lattice.len() {
            return Err(Error::DimensionMismatch {
                expected: lattice.len(),
                found: v.len(),
            });
        }
        Ok(v)
    }

    pub fn self_intersection(&self, lattice: &CurveLattice) -> Result<Option<Rational>> {
        match self {
            Divisor::Coefficients(c) => lattice.matrix.self_intersection(c).map(Some),
            Divisor::Functional {
                self_intersection, ..
            } => Ok(self_intersection.clone()),
        }
    }
}

/// `D = P + N` relative to a curve lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    /// `P·C_i` for every declared curve.
    pub positive_pairings: Vector,
    /// Coefficients of `P`, when `D` was given by coefficients.
    pub positive: Option<Vector>,
    pub negative: Vector,
    /// Curves with a nonzero coefficient in `N`, ascending.
    pub support: Vec<usize>,
    /// `P² = D² - N²`, when `D²` is known.
    pub positive_square: Option<Rational>,
    /// The working set after each round; never shrinks.
    pub support_history: Vec<Vec<usize>>,
}

impl ZariskiDecomposition {
    pub fn negative_square(&self, lattice: &CurveLattice) -> Result<Rational> {
        lattice.matrix.self_intersection(&self.negative)
    }
}

/// Solves for `N` supported on `set` with `(D - N)·C_i = 0` for `i` in `set`.
fn negative_part(
    lattice: &CurveLattice,
    pairings: &Vector,
    set: &[usize],
) -> Result<Vector> {
    let sub = lattice.matrix.principal(set);
    if !sub.is_negative_definite() {
        return Err(Error::NoDecomposition(lattice.names(set)));
    }
    let rhs: Vector = set.iter().map(|&i| pairings[i].clone()).collect();
    let x = sub.solve(&rhs)?;
    let mut n = Vector::zeros(lattice.len());
    for (k, &i) in set.iter().enumerate() {
        n[i] = x[k].clone();
    }
    Ok(n)
}

/// Iterative decomposition. Each round adds every curve with `P·C < 0` to the
/// working set and re-solves on it; at most `n` rounds.
pub fn zariski_decompose(d: &Divisor, lattice: &CurveLattice) -> Result<ZariskiDecomposition> {
    let pairings = d.pairings(lattice)?;
    let mut set: BTreeSet<usize> = BTreeSet::new();
    let mut negative = Vector::zeros(lattice.len());
    let mut history = Vec::new();

    loop {
        let p = pairings.sub(&lattice.matrix.apply(&negative)?)?;
        let violators: Vec<usize> = (0..lattice.len())
            .filter(|&i| p[i].is_negative())
            .collect();
        if violators.is_empty() {
            return finish(d, lattice, negative, p, history);
        }
        set.extend(violators);
        let current: Vec<usize> = set.iter().copied().collect();
        negative = negative_part(lattice, &pairings, &current)?;
        if let Some(i) = (0..lattice.len()).find(|&i| negative[i].is_negative()) {
            return Err(Error::NotEffective(lattice.ids[i].clone()));
        }
        history.push(current);
        debug_assert!(history.len() <= lattice.len());
    }
}

fn finish(
    d: &Divisor,
    lattice: &CurveLattice,
    negative: Vector,
    positive_pairings: Vector,
    support_history: Vec<Vec<usize>>,
) -> Result<ZariskiDecomposition> {
    let support = (0..lattice.len())
        .filter(|&i| !negative[i].is_zero())
        .collect();
    let positive = match d {
        Divisor::Coefficients(c) => Some(c.sub(&negative)?),
        Divisor::Functional { .. } => None,
    };
    let positive_square = match d.self_intersection(lattice)? {
        Some(d2) => Some(d2 - lattice.matrix.self_intersection(&negative)?),
        None => None,
    };
    Ok(ZariskiDecomposition {
        positive_pairings,
        positive,
        negative,
        support,
        positive_square,
        support_history,
    })
}

/// Independent check of a claimed decomposition: `N >= 0`, `P` nef on the
/// lattice, `P·N = 0`, support negative definite and `P + N` has the
/// pairings of `D`.
pub fn verify_decomposition(d: &Divisor, z: &ZariskiDecomposition, lattice: &CurveLattice) -> bool {
    let n = lattice.len();
    if z.negative.len() != n || z.positive_pairings.len() != n {
        return false;
    }
    let Ok(pairings) = d.pairings(lattice) else {
        return false;
    };
    let Ok(n_pairings) = lattice.matrix.apply(&z.negative) else {
        return false;
    };
    let reproduces = (0..n).all(|i| &z.positive_pairings[i] + &n_pairings[i] == pairings[i]);
    let effective = z.negative.is_nonnegative();
    let nef = z.positive_pairings.is_nonnegative();
    let support: Vec<usize> = (0..n).filter(|&i| !z.negative[i].is_zero()).collect();
    let orthogonal = support.iter().all(|&i| z.positive_pairings[i].is_zero());
    let definite = lattice.matrix.principal(&support).is_negative_definite();
    let coefficients_ok = match (d, &z.positive) {
        (Divisor::Coefficients(c), Some(p)) => c.sub(&z.negative).map(|x| &x == p).unwrap_or(false),
        (Divisor::Coefficients(_), None) => false,
        (Divisor::Functional { .. }, _) => true,
    };
    reproduces && effective && nef && orthogonal && definite && support == z.support && coefficients_ok
}
