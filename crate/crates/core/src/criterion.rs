//! Freeness of adjoint systems `|K_Y + D|` at a point.
//!
//! A point `x` can only be a base point when some nonzero effective `E`
//! through `x` satisfies the exclusion system
//!
//! ```text
//! 0 <= D·E < δ_x / 2,   D·E - δ_x / 4 <= E² <= (D·E)² / D²,   E² < 0 if D·E = 0
//! ```
//!
//! whenever `D² > δ_x`. [`freeness_verdict`] searches for such `E` among
//! bounded combinations of declared curve classes, so `Free` always means
//! free relative to those classes and that bound.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cycles::{self, SingularityClass, SingularityKind};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::lattice::{integer, Rational};
use crate::zariski::CurveLattice;

pub const DEFAULT_BOUND: u32 = 10;

/// `D²` and the pairings `D·C` with declared curve classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    pub d2: Rational,
    pub pairings: BTreeMap<String, Rational>,
}

impl DivisorData {
    pub fn new(d2: Rational, pairings: BTreeMap<String, Rational>) -> Self {
        DivisorData { d2, pairings }
    }

    pub fn min_pairing(&self) -> Option<&Rational> {
        self.pairings.values().min()
    }

    pub fn require_nef(&self) -> Result<()> {
        match self.pairings.iter().find(|(_, v)| v.is_negative()) {
            Some((curve, value)) => Err(Error::NotNef {
                curve: curve.clone(),
                value: value.clone(),
            }),
            None => Ok(()),
        }
    }
}

/// Whether `(D·E, E²)` satisfies the exclusion system for `δ_x = delta`.
pub fn check_exclusion(
    d2: &Rational,
    de: &Rational,
    e2: &Rational,
    delta: &Rational,
) -> Result<bool> {
    if d2 <= delta {
        return Err(Error::Inapplicable {
            d2: Box::new(d2.clone()),
            delta: Box::new(delta.clone()),
        });
    }
    let half = delta / integer(2);
    let quarter = delta / integer(4);
    let ok = !de.is_negative()
        && de < &half
        && &(de - quarter) <= e2
        && e2 <= &(de * de / d2)
        && (!de.is_zero() || e2.is_negative());
    Ok(ok)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExclusionWitness {
    /// Coefficients aligned with the through-`x` curve list.
    pub coefficients: Vec<u32>,
    #[serde(serialize_with = "ser_rational")]
    pub de: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub e2: Rational,
}

fn ser_rational<S: serde::Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Free,
    PossiblyNotFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(serialize_with = "ser_rational")]
    pub delta_x: Rational,
    /// Curve ids the witness coefficients refer to.
    pub curves: Vec<String>,
    /// Sorted lexicographically by coefficient vector.
    pub witnesses: Vec<ExclusionWitness>,
    pub caveat: String,
}

impl Verdict {
    pub fn is_free(&self) -> bool {
        self.kind == VerdictKind::Free
    }

    /// `E` of a witness written as a combination of curve ids.
    pub fn describe(&self, w: &ExclusionWitness) -> String {
        let terms: Vec<String> = self
            .curves
            .iter()
            .zip(&w.coefficients)
            .filter(|(_, &c)| c > 0)
            .map(|(id, &c)| if c == 1 { id.clone() } else { format!("{c} {id}") })
            .collect();
        terms.join(" + ")
    }
}

/// Searches effective `E = Σ e_i C_i` (`0 <= e_i <= bound`, `E != 0`) over
/// the through-`x` curves for solutions of the exclusion system.
pub fn freeness_verdict(
    point: &SingularityClass,
    d: &DivisorData,
    curves: &CurveLattice,
    through_x: &[String],
    bound: u32,
) -> Result<Verdict> {
    d.require_nef()?;
    let delta = point.delta_x.clone();
    if d.d2 <= delta {
        return Err(Error::Inapplicable {
            d2: Box::new(d.d2.clone()),
            delta: Box::new(delta),
        });
    }
    let ids = through_x.to_vec();
    if point.kind == SingularityKind::NotLogTerminal {
        return Ok(Verdict {
            kind: VerdictKind::Free,
            delta_x: delta,
            curves: ids,
            witnesses: Vec::new(),
            caveat: "unconditional: the point is not log terminal".into(),
        });
    }

    let mut index = Vec::with_capacity(ids.len());
    let mut pairing = Vec::with_capacity(ids.len());
    for id in &ids {
        index.push(curves.index_of(id).ok_or_else(|| Error::UnknownVertex(id.clone()))?);
        pairing.push(
            d.pairings
                .get(id)
                .cloned()
                .ok_or_else(|| Error::MissingPairing(id.clone()))?,
        );
    }
    let m = curves.matrix();
    let gram: Vec<Vec<Rational>> = index
        .iter()
        .map(|&i| index.iter().map(|&j| m.get(i, j).clone()).collect())
        .collect();

    let mut search = Search {
        d2: &d.d2,
        delta: &delta,
        half: &delta / integer(2),
        pairing: &pairing,
        gram: &gram,
        bound,
        current: vec![0; ids.len()],
        witnesses: Vec::new(),
    };
    search.descend(0, &Rational::zero())?;
    let mut witnesses = search.witnesses;
    witnesses.sort();

    let kind = if witnesses.is_empty() {
        VerdictKind::Free
    } else {
        VerdictKind::PossiblyNotFree
    };
    Ok(Verdict {
        kind,
        delta_x: delta,
        curves: ids,
        witnesses,
        caveat: format!(
            "bounded search: relative to the declared curves and coefficient bound {bound}"
        ),
    })
}

struct Search<'a> {
    d2: &'a Rational,
    delta: &'a Rational,
    half: Rational,
    pairing: &'a [Rational],
    gram: &'a [Vec<Rational>],
    bound: u32,
    current: Vec<u32>,
    witnesses: Vec<ExclusionWitness>,
}

impl Search<'_> {
    // Pairings are non-negative, so D·E only grows with the coefficients and
    // a branch can be cut as soon as D·E reaches δ/2.
    fn descend(&mut self, k: usize, de: &Rational) -> Result<()> {
        if k == self.current.len() {
            if self.current.iter().any(|&c| c > 0) {
                self.test(de)?;
            }
            return Ok(());
        }
        for c in 0..=self.bound {
            let next = de + &self.pairing[k] * integer(c as i64);
            if next >= self.half {
                break;
            }
            self.current[k] = c;
            self.descend(k + 1, &next)?;
        }
        self.current[k] = 0;
        Ok(())
    }

    fn test(&mut self, de: &Rational) -> Result<()> {
        let n = self.current.len();
        let mut e2 = Rational::zero();
        for i in 0..n {
            if self.current[i] == 0 {
                continue;
            }
            for j in 0..n {
                if self.current[j] == 0 {
                    continue;
                }
                e2 += &self.gram[i][j] * integer(self.current[i] as i64 * self.current[j] as i64);
            }
        }
        if check_exclusion(self.d2, de, &e2, self.delta)? {
            self.witnesses.push(ExclusionWitness {
                coefficients: self.current.clone(),
                de: de.clone(),
                e2,
            });
        }
        Ok(())
    }
}

/// `D² > δ` and `D·C >= δ/2` for every declared curve; then `x` is not a base
/// point.
pub fn corollary2_check(delta: &Rational, d: &DivisorData) -> bool {
    let half = delta / integer(2);
    &d.d2 > delta && d.pairings.values().all(|v| v >= &half)
}

/// For ample `A`: `tA` meets the bounds of [`corollary2_check`] at every
/// point type once `t >= 3`, or `t = 2` and `A² > 1`.
pub fn corollary1_check(a: &DivisorData, t: i64) -> Result<bool> {
    if t <= 0 {
        return Err(Error::NonPositiveMultiplier(t));
    }
    if !a.d2.is_positive() || a.pairings.values().any(|v| !v.is_positive()) {
        return Err(Error::NotAmple);
    }
    Ok(t >= 3 || (t == 2 && a.d2 > integer(1)))
}

/// Whether `g` is a rational double point graph: a simple tree of rational
/// `(-2)`-curves that is negative definite.
pub fn is_ade(g: &DualGraph) -> bool {
    g.is_rational_snc_tree()
        && g.weights().iter().all(|&w| w == 2)
        && g.intersection_matrix().is_negative_definite()
}

/// For an ADE graph: every fundamental-cycle coefficient is at least 2.
pub fn corollary4_check(g: &DualGraph) -> Result<bool> {
    if !is_ade(g) {
        return Err(Error::NotAde);
    }
    let z = cycles::fundamental_cycle(g)?;
    Ok(z.min_coefficient().is_some_and(|c| c >= &integer(2)))
}
