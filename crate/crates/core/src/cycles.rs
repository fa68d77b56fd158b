//! Fundamental cycle, discrepancy divisor, classification and `δ_x`.
//!
//! On the minimal resolution `f: X → Y` of a point `x`, the discrepancy
//! divisor `Δ = Σ a_i C_i` is defined by `f*K_Y = K_X + Δ`, i.e. by the linear
//! system `Δ·C_i = C_i² + 2 - 2p_a(C_i)`. The fundamental cycle `Z` is the
//! smallest nonzero effective integral cycle with `Z·C_i <= 0` for all `i`.
//! A log terminal point has `δ_x = -(Δ - Z)²`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::lattice::{self, integer, Rational, Vector};

/// A ℚ-linear combination of the exceptional curves of one dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    labels: Vec<String>,
    coefficients: Vector,
}

impl Cycle {
    pub fn new(graph: &DualGraph, coefficients: Vector) -> Result<Self> {
        if coefficients.len() != graph.len() {
            return Err(Error::DimensionMismatch {
                expected: graph.len(),
                found: coefficients.len(),
            });
        }
        Ok(Cycle {
            labels: graph.ids(),
            coefficients,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coefficients(&self) -> &Vector {
        &self.coefficients
    }

    pub fn coefficient(&self, id: &str) -> Option<&Rational> {
        self.labels
            .iter()
            .position(|l| l == id)
            .map(|i| &self.coefficients[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_zero()
    }

    pub fn is_effective(&self) -> bool {
        self.coefficients.is_nonnegative()
    }

    pub fn min_coefficient(&self) -> Option<&Rational> {
        self.coefficients.iter().min()
    }

    pub fn max_coefficient(&self) -> Option<&Rational> {
        self.coefficients.iter().max()
    }
}

/// `Σ c_i label_i` with unit coefficients omitted, zero terms dropped and
/// `0` for the empty sum, e.g. `1/2 C1 + C2`.
pub fn format_combination(labels: &[String], coefficients: &[Rational]) -> String {
    let mut out = String::new();
    for (label, c) in labels.iter().zip(coefficients) {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let magnitude = c.abs();
        if !magnitude.is_one() {
            out.push_str(&format!("{magnitude} "));
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(&self.labels, self.coefficients.coords()))
    }
}

/// A point of a normal surface: smooth, or singular with the dual graph of
/// its minimal resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Smooth,
    Singular(DualGraph),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SingularityKind {
    Smooth,
    RationalDoublePoint,
    LogTerminal,
    NotLogTerminal,
}

impl SingularityKind {
    pub fn is_log_terminal(self) -> bool {
        matches!(
            self,
            SingularityKind::RationalDoublePoint | SingularityKind::LogTerminal
        )
    }
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SingularityKind::Smooth => "Smooth",
            SingularityKind::RationalDoublePoint => "RationalDoublePoint",
            SingularityKind::LogTerminal => "LogTerminal",
            SingularityKind::NotLogTerminal => "NotLogTerminal",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    pub kind: SingularityKind,
    pub delta_x: Rational,
    /// `None` for a smooth point.
    pub discrepancy: Option<Cycle>,
    /// `None` for a smooth point.
    pub fundamental_cycle: Option<Cycle>,
}

fn require_negative_definite(m: &[Vec<i64>]) -> Result<()> {
    if lattice::integer_is_negative_definite(m) {
        Ok(())
    } else {
        Err(Error::NotNegativeDefinite)
    }
}

/// Laufer's procedure with a caller-chosen step: starting from the reduced
/// cycle, while some `C_i` has `Z·C_i > 0`, add one such `C_i`. `pick`
/// receives the (sorted, nonempty) list of candidates and returns one of them.
///
/// The graph must be negative definite; this is not rechecked here.
pub fn laufer_by(g: &DualGraph, pick: impl FnMut(&[usize]) -> usize) -> Vec<i64> {
    laufer_on(&g.intersection_matrix_integers(), pick)
}

fn laufer_on(m: &[Vec<i64>], mut pick: impl FnMut(&[usize]) -> usize) -> Vec<i64> {
    let n = m.len();
    let mut z = vec![1i64; n];
    let mut products: Vec<i64> = m.iter().map(|row| row.iter().sum()).collect();
    let mut candidates = Vec::with_capacity(n);
    loop {
        candidates.clear();
        candidates.extend((0..n).filter(|&i| products[i] > 0));
        if candidates.is_empty() {
            return z;
        }
        let i = pick(&candidates);
        assert!(candidates.contains(&i), "pick must return a candidate");
        z[i] += 1;
        for (k, p) in products.iter_mut().enumerate() {
            *p += m[k][i];
        }
    }
}

fn laufer(m: &[Vec<i64>]) -> Vec<i64> {
    laufer_on(m, |candidates| candidates[0])
}

/// The fundamental cycle, computed with lowest-index tie-breaking.
pub fn fundamental_cycle(g: &DualGraph) -> Result<Cycle> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    Cycle::new(g, Vector::from_integers(&laufer(&m)))
}

/// `Δ` as integer numerators over a positive common denominator.
struct Discrepancy {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl Discrepancy {
    fn of(g: &DualGraph, m: &[Vec<i64>]) -> Result<Self> {
        let (numerators, denominator) =
            lattice::integer_solve(m, &g.adjunction_rhs_integers()).ok_or(Error::Singular)?;
        debug_assert!(numerators.iter().all(|x| !x.is_negative()));
        Ok(Discrepancy {
            numerators,
            denominator,
        })
    }

    fn is_zero(&self) -> bool {
        self.numerators.iter().all(Zero::is_zero)
    }

    fn all_below_one(&self) -> bool {
        self.numerators.iter().all(|x| x < &self.denominator)
    }

    fn vector(&self) -> Vector {
        self.numerators
            .iter()
            .map(|x| Rational::new(x.clone(), self.denominator.clone()))
            .collect()
    }

    /// `-(Δ - Z)²`, evaluated on `den·Δ - den·Z` and divided by `den²` once.
    fn minus_square_minus(&self, m: &[Vec<i64>], z: &[i64]) -> Rational {
        let v: Vec<BigInt> = self
            .numerators
            .iter()
            .zip(z)
            .map(|(a, &c)| a - &self.denominator * c)
            .collect();
        let mut total = BigInt::zero();
        for (i, row) in m.iter().enumerate() {
            let mut acc = BigInt::zero();
            for (j, &mij) in row.iter().enumerate() {
                if mij != 0 {
                    acc += &v[j] * mij;
                }
            }
            total += &v[i] * acc;
        }
        Rational::new(-total, &self.denominator * &self.denominator)
    }
}

/// The discrepancy divisor `Δ` with `f*K_Y = K_X + Δ`.
pub fn discrepancy(g: &DualGraph) -> Result<Cycle> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    Cycle::new(g, Discrepancy::of(g, &m)?.vector())
}

pub fn classify(point: &Point) -> Result<SingularityClass> {
    match point {
        Point::Smooth => Ok(SingularityClass {
            kind: SingularityKind::Smooth,
            delta_x: integer(4),
            discrepancy: None,
            fundamental_cycle: None,
        }),
        Point::Singular(g) => classify_graph(g),
    }
}

fn kind_and_delta(
    g: &DualGraph,
    m: &[Vec<i64>],
    a: &Discrepancy,
    z: &[i64],
) -> (SingularityKind, Rational) {
    if a.is_zero() {
        (SingularityKind::RationalDoublePoint, integer(2))
    } else if g.is_rational_snc_tree() && a.all_below_one() {
        (SingularityKind::LogTerminal, a.minus_square_minus(m, z))
    } else {
        (SingularityKind::NotLogTerminal, Rational::zero())
    }
}

pub fn classify_graph(g: &DualGraph) -> Result<SingularityClass> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    let a = Discrepancy::of(g, &m)?;
    let z = laufer(&m);
    let (kind, delta_x) = kind_and_delta(g, &m, &a, &z);
    Ok(SingularityClass {
        kind,
        delta_x,
        discrepancy: Some(Cycle::new(g, a.vector())?),
        fundamental_cycle: Some(Cycle::new(g, Vector::from_integers(&z))?),
    })
}

/// Kind and `δ_x` only, without building the cycles.
pub fn classify_kind(g: &DualGraph) -> Result<(SingularityKind, Rational)> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    let a = Discrepancy::of(g, &m)?;
    let z = laufer(&m);
    Ok(kind_and_delta(g, &m, &a, &z))
}

pub fn delta_x(point: &Point) -> Result<Rational> {
    classify(point).map(|c| c.delta_x)
}

pub fn delta_x_of_graph(g: &DualGraph) -> Result<Rational> {
    classify_kind(g).map(|(_, delta)| delta)
}

/// `-(Δ - Z)²` whatever the class; equal to `δ_x` on log terminal points.
pub fn minus_square_of_difference(g: &DualGraph) -> Result<Rational> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    Ok(Discrepancy::of(g, &m)?.minus_square_minus(&m, &laufer(&m)))
}

/// Pairings `(Δ - Z)·C_i` for every curve.
pub fn difference_pairings(g: &DualGraph) -> Result<Vector> {
    let m = g.intersection_matrix_integers();
    require_negative_definite(&m)?;
    let a = Discrepancy::of(g, &m)?.vector();
    let z = Vector::from_integers(&laufer(&m));
    g.intersection_matrix().apply(&a.sub(&z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_an, make_dn, make_dynkin_e, DualGraph};
    use crate::lattice::rational;

    fn coeffs(c: &Cycle) -> Vec<Rational> {
        c.coefficients().iter().cloned().collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| integer(x)).collect()
    }

    #[test]
    fn fundamental_cycle_examples() {
        for ws in [vec![2], vec![5], vec![3, 2, 4], vec![2, 2, 2, 2, 2]] {
            let z = fundamental_cycle(&make_an(&ws).unwrap()).unwrap();
            assert_eq!(coeffs(&z), ints(&vec![1; ws.len()]));
        }

        // D_n-i: C_{n-2}² <= -3 gives the reduced cycle.
        let g = make_dn(&[2, 2, 3], 2, 2).unwrap();
        assert_eq!(coeffs(&fundamental_cycle(&g).unwrap()), ints(&[1, 1, 1, 1, 1]));

        // D_n-ii: coefficient 2 from C_{j+1} to C_{n-2}.
        let g = make_dn(&[2, 3, 2, 2], 2, 2).unwrap();
        assert_eq!(
            coeffs(&fundamental_cycle(&g).unwrap()),
            ints(&[1, 1, 2, 2, 1, 1])
        );

        let e8 = make_dynkin_e(8).unwrap();
        let z = fundamental_cycle(&e8).unwrap();
        assert_eq!(z.min_coefficient().unwrap(), &integer(2));
        assert_eq!(z.max_coefficient().unwrap(), &integer(6));

        let d4 = make_dn(&[2, 2], 2, 2).unwrap();
        assert_eq!(coeffs(&fundamental_cycle(&d4).unwrap()), ints(&[1, 2, 1, 1]));
    }

    #[test]
    fn not_negative_definite_is_rejected() {
        let affine = DualGraph::parse(
            r#"{"vertices":[{"id":"A","weight":2},{"id":"B","weight":2}],"edges":[["A","B"],["A","B"]]}"#,
        )
        .unwrap();
        assert_eq!(fundamental_cycle(&affine).unwrap_err(), Error::NotNegativeDefinite);
        assert_eq!(discrepancy(&affine).unwrap_err(), Error::NotNegativeDefinite);
        let err = classify(&Point::Singular(affine)).unwrap_err();
        assert!(err.to_string().contains("not a contractible exceptional configuration"));
    }

    #[test]
    fn discrepancy_examples() {
        for g in [
            make_an(&[2, 2, 2]).unwrap(),
            make_dn(&[2, 2, 2], 2, 2).unwrap(),
            make_dynkin_e(6).unwrap(),
            make_dynkin_e(7).unwrap(),
            make_dynkin_e(8).unwrap(),
        ] {
            assert!(discrepancy(&g).unwrap().is_zero());
        }
        for w in 2..30i64 {
            let d = discrepancy(&make_an(&[w as u32]).unwrap()).unwrap();
            assert_eq!(coeffs(&d), vec![Rational::one() - rational(2, w)]);
        }
        let d = discrepancy(&make_an(&[3, 3]).unwrap()).unwrap();
        assert_eq!(coeffs(&d), vec![rational(1, 2), rational(1, 2)]);
    }

    #[test]
    fn classify_examples() {
        let smooth = classify(&Point::Smooth).unwrap();
        assert_eq!(smooth.kind, SingularityKind::Smooth);
        assert_eq!(smooth.delta_x, integer(4));
        assert!(smooth.discrepancy.is_none());

        let a1 = classify(&Point::Singular(make_an(&[2]).unwrap())).unwrap();
        assert_eq!(a1.kind, SingularityKind::RationalDoublePoint);
        assert_eq!(a1.delta_x, integer(2));
        assert!(a1.discrepancy.unwrap().is_zero());

        for w in 3..20i64 {
            let c = classify(&Point::Singular(make_an(&[w as u32]).unwrap())).unwrap();
            assert_eq!(c.kind, SingularityKind::LogTerminal);
            assert_eq!(c.delta_x, rational(4, w));
        }
    }

    #[test]
    fn delta_examples() {
        for n in 1..8 {
            let g = make_an(&vec![2; n]).unwrap();
            assert_eq!(delta_x_of_graph(&g).unwrap(), integer(2));
        }
        assert_eq!(
            delta_x_of_graph(&make_an(&[3, 3]).unwrap()).unwrap(),
            integer(1)
        );
        // D_n-ii: δ = 2 - a_1.
        let g = make_dn(&[2, 2, 3, 2], 2, 2).unwrap();
        let a1 = discrepancy(&g).unwrap().coefficient("C1").unwrap().clone();
        assert_eq!(delta_x_of_graph(&g).unwrap(), integer(2) - a1);
        // D_n-iii: δ = 2 - a_2.
        let g = make_dn(&[3, 2, 2], 2, 2).unwrap();
        let a2 = discrepancy(&g).unwrap().coefficient("C2").unwrap().clone();
        assert_eq!(delta_x_of_graph(&g).unwrap(), integer(2) - a2);
    }

    #[test]
    fn non_log_terminal_configurations() {
        // Four (-2)-arms around a (-3)-curve: a_center >= 1.
        let star4 = DualGraph::with_named_edges(
            vec![
                crate::graph::Vertex::rational("C0", 3),
                crate::graph::Vertex::rational("A", 2),
                crate::graph::Vertex::rational("B", 2),
                crate::graph::Vertex::rational("C", 2),
                crate::graph::Vertex::rational("D", 2),
            ],
            &[("C0", "A"), ("C0", "B"), ("C0", "C"), ("C0", "D")],
        )
        .unwrap();
        let c = classify_graph(&star4).unwrap();
        assert_eq!(c.kind, SingularityKind::NotLogTerminal);
        assert_eq!(c.delta_x, Rational::zero());
        assert!(c.discrepancy.unwrap().coefficient("C0").unwrap() >= &Rational::one());

        // Elliptic curve: genus shifts the right-hand side.
        let elliptic = DualGraph::parse(r#"{"vertices":[{"id":"E","weight":1,"genus":1}]}"#);
        assert!(elliptic.is_err());
        let elliptic =
            DualGraph::parse(r#"{"vertices":[{"id":"E","weight":3,"genus":1}]}"#).unwrap();
        assert_eq!(coeffs(&discrepancy(&elliptic).unwrap()), ints(&[1]));
        assert_eq!(
            classify_graph(&elliptic).unwrap().kind,
            SingularityKind::NotLogTerminal
        );

        // Nodal rational curve: a < 1 but not a tree, so not log terminal.
        let nodal =
            DualGraph::parse(r#"{"vertices":[{"id":"N","weight":5}],"edges":[["N","N"]]}"#)
                .unwrap();
        let c = classify_graph(&nodal).unwrap();
        assert_eq!(coeffs(c.discrepancy.as_ref().unwrap()), ints(&[1]));
        assert_eq!(c.kind, SingularityKind::NotLogTerminal);

        // Two (-3)-curves meeting twice: negative definite, multi-edge.
        let double = DualGraph::parse(
            r#"{"vertices":[{"id":"A","weight":3},{"id":"B","weight":3}],"edges":[["A","B"],["A","B"]]}"#,
        )
        .unwrap();
        let c = classify_graph(&double).unwrap();
        assert_eq!(c.kind, SingularityKind::NotLogTerminal);
        assert_eq!(coeffs(c.discrepancy.as_ref().unwrap()), ints(&[1, 1]));
    }

    #[test]
    fn cycle_display() {
        let z = fundamental_cycle(&make_dn(&[2, 2], 2, 2).unwrap()).unwrap();
        assert_eq!(z.to_string(), "C1 + 2 C2 + C'1 + C''1");
        let d = discrepancy(&make_an(&[3, 3]).unwrap()).unwrap();
        assert_eq!(d.to_string(), "1/2 C1 + 1/2 C2");
        let zero = discrepancy(&make_an(&[2]).unwrap()).unwrap();
        assert_eq!(zero.to_string(), "0");
    }
}
