//! Reproduction of the E-type invariant tables.
//!
//! Three tables are regenerated from the dual graphs alone and compared with
//! the published values:
//!
//! * the closed forms `δ_x(μ)` for the fifteen E-types, `μ >= 3`;
//! * `δ_x` at `μ = 2` for the twelve types that are not du Val there;
//! * `d/4` with `d = -(Z - Δ - μ_i C_i)²` at `μ = 2`, where `C_i` is the
//!   component with `(Δ - Z)·C_i = 1` and fundamental-cycle coefficient 2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cycles;
use crate::error::{Error, Result};
use crate::graph::{make_en, DualGraph, EnTypeDescriptor};
use crate::lattice::{integer, rational, Rational, Vector};

/// One closed form `base + sign / (scale · (slope·μ - offset))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub type_id: u32,
    pub notation: &'static str,
    base: (i64, i64),
    sign: i64,
    scale: i64,
    slope: i64,
    offset: i64,
    mu3: (i64, i64),
}

const fn row(
    type_id: u32,
    notation: &'static str,
    base: (i64, i64),
    sign: i64,
    scale: i64,
    offset: i64,
    mu3: (i64, i64),
) -> TableRow {
    TableRow {
        type_id,
        notation,
        base,
        sign,
        scale,
        slope: scale,
        offset,
        mu3,
    }
}

const fn row_with_slope(
    type_id: u32,
    notation: &'static str,
    base: (i64, i64),
    scale: i64,
    slope: i64,
    offset: i64,
    mu3: (i64, i64),
) -> TableRow {
    TableRow {
        type_id,
        notation,
        base,
        sign: 1,
        scale,
        slope,
        offset,
        mu3,
    }
}

pub const TABLE1: [TableRow; 15] = [
    row(1, "(μ;2,2;2,2)", (11, 6), 1, 6, 11, (13, 7)),
    // Sign is +: agrees with the μ=3 value 41/27 and with 14/9 at μ=2.
    row_with_slope(2, "(μ;2,2;3)", (3, 2), 18, 2, 3, (41, 27)),
    row(3, "(μ;3;3)", (7, 6), 1, 6, 7, (13, 11)),
    row(4, "(μ;2,2,2;2,2)", (23, 12), 1, 12, 23, (25, 13)),
    row(5, "(μ;2,2,2;3)", (19, 12), 1, 12, 19, (27, 17)),
    row(6, "(μ;4;2,2)", (17, 12), 1, 12, 17, (27, 19)),
    row(7, "(μ;4;3)", (13, 12), 1, 12, 13, (25, 23)),
    row(8, "(μ;2,2,2,2;2,2)", (59, 30), 1, 30, 59, (61, 31)),
    row(9, "(μ;2,2,2,2;3)", (49, 30), 1, 30, 49, (67, 41)),
    row(10, "(μ;2,3;2,2)", (53, 30), 1, 30, 47, (76, 43)),
    row(11, "(μ;2,3;3)", (43, 30), 1, 30, 37, (76, 53)),
    row(12, "(μ;3,2;2,2)", (47, 30), 1, 30, 53, (58, 37)),
    row(13, "(μ;3,2;3)", (37, 30), 1, 30, 43, (58, 47)),
    row(14, "(μ;5;2,2)", (41, 30), 1, 30, 41, (67, 49)),
    row(15, "(μ;5;3)", (31, 30), 1, 30, 31, (61, 59)),
];

impl TableRow {
    pub fn base(&self) -> Rational {
        rational(self.base.0, self.base.1)
    }

    pub fn mu3_value(&self) -> Rational {
        rational(self.mu3.0, self.mu3.1)
    }

    /// Closed form at `mu`, without range checks. The linear form stays
    /// positive for every `mu >= 2`.
    pub fn evaluate(&self, mu: u32) -> Rational {
        let denominator = self.scale * (self.slope * mu as i64 - self.offset);
        self.base() + rational(self.sign, denominator)
    }

    /// Human-readable closed form, e.g. `3/2 + 1/(18(2μ - 3))`.
    pub fn formula(&self) -> String {
        let sign = if self.sign < 0 { '-' } else { '+' };
        format!(
            "{} {sign} 1/({}({}μ - {}))",
            self.base(),
            self.scale,
            self.slope,
            self.offset
        )
    }
}

fn table_row(type_id: u32) -> Result<&'static TableRow> {
    if !(1..=15).contains(&type_id) {
        return Err(Error::TypeOutOfRange(type_id));
    }
    Ok(&TABLE1[type_id as usize - 1])
}

fn check_mu(mu: u32) -> Result<()> {
    if mu < 3 {
        return Err(Error::MuOutOfRange { mu, min: 3 });
    }
    Ok(())
}

/// Closed-form `δ_x` of E-type `type_id` with central weight `mu >= 3`.
pub fn table1_formula(type_id: u32, mu: u32) -> Result<Rational> {
    let row = table_row(type_id)?;
    check_mu(mu)?;
    Ok(row.evaluate(mu))
}

fn en_graph(type_id: u32, mu: u32) -> Result<DualGraph> {
    make_en(&EnTypeDescriptor::new(type_id, mu)?)
}

/// `δ_x` of E-type `type_id` computed from its dual graph.
pub fn table1_computed(type_id: u32, mu: u32) -> Result<Rational> {
    table_row(type_id)?;
    check_mu(mu)?;
    cycles::delta_x_of_graph(&en_graph(type_id, mu)?)
}

/// Types whose `μ = 2` instance is not a rational double point, with the
/// published `δ_x`.
pub const MU2_EXPECTED: [(u32, i64, i64); 12] = [
    (2, 14, 9),
    (3, 6, 5),
    (5, 8, 5),
    (6, 10, 7),
    (7, 12, 11),
    (9, 18, 11),
    (10, 23, 13),
    (11, 33, 23),
    (12, 11, 7),
    (13, 21, 17),
    (14, 26, 19),
    (15, 30, 29),
];

/// Computed `δ_x` at `μ = 2` for the twelve listed types.
pub fn mu2_table() -> Result<BTreeMap<u32, Rational>> {
    MU2_EXPECTED
        .iter()
        .map(|&(t, _, _)| Ok((t, cycles::delta_x_of_graph(&en_graph(t, 2)?)?)))
        .collect()
}

/// Published cell of the `d/4` table, written `numerator / denominator`.
/// Truncated cells show only the leading digits of the numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Case33Display {
    pub type_id: u32,
    pub delta: (i64, i64),
    pub numerator: &'static str,
    pub denominator: i64,
    pub truncated: bool,
}

const fn exact(type_id: u32, delta: (i64, i64), numerator: &'static str, denominator: i64) -> Case33Display {
    Case33Display {
        type_id,
        delta,
        numerator,
        denominator,
        truncated: false,
    }
}

const fn cut(type_id: u32, delta: (i64, i64), numerator: &'static str, denominator: i64) -> Case33Display {
    Case33Display {
        type_id,
        delta,
        numerator,
        denominator,
        truncated: true,
    }
}

pub const CASE33_DISPLAY: [Case33Display; 15] = [
    exact(1, (2, 1), "1.5", 1),
    cut(2, (14, 9), "7.3", 9),
    exact(3, (6, 5), "2.1", 5),
    exact(4, (2, 1), "1.5", 1),
    exact(5, (8, 5), "4.4", 5),
    cut(6, (10, 7), "4.6", 7),
    cut(7, (12, 11), "3.5", 11),
    exact(8, (2, 1), "1.5", 1),
    cut(9, (18, 11), "10.2", 11),
    cut(10, (23, 13), "9.2", 13),
    cut(11, (33, 23), "8.7", 23),
    cut(12, (11, 7), "5.8", 7),
    cut(13, (21, 17), "7.7", 17),
    cut(14, (26, 19), "11.2", 19),
    cut(15, (30, 29), "8.0", 29),
];

/// Parses a decimal literal such as `10.2`.
fn decimal(text: &str) -> Rational {
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits: i64 = format!("{whole}{frac}").parse().expect("table literals are decimal");
    rational(digits, 10i64.pow(frac.len() as u32))
}

impl Case33Display {
    pub fn delta(&self) -> Rational {
        rational(self.delta.0, self.delta.1)
    }

    /// Exact cells compare equal; truncated cells compare
    /// `floor(10 · denominator · d/4)` with the shown digits.
    pub fn matches(&self, d: &Rational) -> bool {
        let shown = decimal(self.numerator);
        let quarter = d / integer(4);
        let scaled = &quarter * integer(self.denominator);
        if self.truncated {
            let tenths = (scaled * integer(10)).floor();
            tenths == shown * integer(10)
        } else {
            scaled == shown
        }
    }

    pub fn shown(&self) -> String {
        let dots = if self.truncated { ".." } else { "" };
        if self.denominator == 1 {
            format!("{}{dots}", self.numerator)
        } else {
            format!("{}{dots}/{}", self.numerator, self.denominator)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case33Cell {
    pub type_id: u32,
    /// Id of the designated component `C_i`.
    pub component: String,
    pub delta_x: Rational,
    pub d: Rational,
}

/// Components with `(Δ - Z)·C_i = 1`.
pub fn marked_components(g: &DualGraph) -> Result<Vec<usize>> {
    let pairings = cycles::difference_pairings(g)?;
    Ok((0..g.len())
        .filter(|&i| pairings[i] == Rational::one())
        .collect())
}

/// `d = -(Z - Δ - μ_i C_i)²` with `μ_i = c_i - a_i`.
pub fn d_for_component(g: &DualGraph, i: usize) -> Result<Rational> {
    let z = cycles::fundamental_cycle(g)?;
    let a = cycles::discrepancy(g)?;
    let mut mu: Vector = z.coefficients().sub(a.coefficients())?;
    mu[i] = Rational::zero();
    Ok(-g.intersection_matrix().self_intersection(&mu)?)
}

/// The marked component whose fundamental-cycle coefficient is 2.
pub fn case33_component(g: &DualGraph) -> Result<usize> {
    let z = cycles::fundamental_cycle(g)?;
    let two = integer(2);
    let found: Vec<usize> = marked_components(g)?
        .into_iter()
        .filter(|&i| z.coefficients()[i] == two)
        .collect();
    match found.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::InvalidInput(format!(
            "expected exactly one marked component with coefficient 2, found {}",
            found.len()
        ))),
    }
}

/// `(δ_x, d)` for all fifteen types at `μ = 2`.
pub fn case33_table() -> Result<BTreeMap<u32, Case33Cell>> {
    (1..=15)
        .map(|t| {
            let g = en_graph(t, 2)?;
            let i = case33_component(&g)?;
            let cell = Case33Cell {
                type_id: t,
                component: g.vertices()[i].id.clone(),
                delta_x: cycles::delta_x_of_graph(&g)?,
                d: d_for_component(&g, i)?,
            };
            Ok((t, cell))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub table: &'static str,
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub cells: Vec<TableCell>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn passed(&self) -> usize {
        self.cells.iter().filter(|c| c.pass).count()
    }

    pub fn count(&self, table: &str) -> usize {
        self.cells.iter().filter(|c| c.table == table).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {} {} expected={} computed={}\n",
                c.table, c.key, c.expected, c.computed
            ));
        }
        out.push_str(&format!(
            "{}/{} cells pass\n",
            self.passed(),
            self.cells.len()
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let value = serde_json::json!({
            "cells": self.cells,
            "passed": self.passed(),
            "total": self.cells.len(),
        });
        serde_json::to_string_pretty(&value).expect("reports always serialize")
    }
}

/// Decimal rendering of `d/4 · denominator` to two places, truncated.
fn truncated_decimal(value: &Rational) -> String {
    let hundredths = (value * integer(100)).floor().to_integer();
    let whole = &hundredths / BigInt::from(100);
    let frac = (&hundredths % BigInt::from(100)).to_string();
    format!("{whole}.{frac:0>2}")
}

/// Regenerates every table and compares cell by cell.
pub fn reproduce_tables() -> Result<TableReport> {
    let mut cells = Vec::new();
    for row in &TABLE1 {
        let computed = row.evaluate(3);
        cells.push(TableCell {
            table: "table1-mu3",
            key: format!("type={}", row.type_id),
            expected: row.mu3_value().to_string(),
            pass: computed == row.mu3_value(),
            computed: computed.to_string(),
        });
    }
    for row in &TABLE1 {
        for mu in 3..=10 {
            let expected = table1_formula(row.type_id, mu)?;
            let computed = table1_computed(row.type_id, mu)?;
            cells.push(TableCell {
                table: "table1",
                key: format!("type={} mu={mu}", row.type_id),
                expected: expected.to_string(),
                pass: computed == expected,
                computed: computed.to_string(),
            });
        }
    }
    let mu2 = mu2_table()?;
    for &(t, p, q) in &MU2_EXPECTED {
        let expected = rational(p, q);
        let computed = &mu2[&t];
        cells.push(TableCell {
            table: "mu2",
            key: format!("type={t}"),
            expected: expected.to_string(),
            pass: computed == &expected,
            computed: computed.to_string(),
        });
    }
    let case33 = case33_table()?;
    for shown in &CASE33_DISPLAY {
        let cell = &case33[&shown.type_id];
        cells.push(TableCell {
            table: "case33-delta",
            key: format!("type={}", shown.type_id),
            expected: shown.delta().to_string(),
            pass: cell.delta_x == shown.delta(),
            computed: cell.delta_x.to_string(),
        });
        let quarter = &cell.d / integer(4);
        let computed = if shown.denominator == 1 {
            quarter.to_string()
        } else {
            format!(
                "{}/{} (= {})",
                truncated_decimal(&(&quarter * integer(shown.denominator))),
                shown.denominator,
                quarter
            )
        };
        cells.push(TableCell {
            table: "case33-d/4",
            key: format!("type={} component={}", shown.type_id, cell.component),
            expected: shown.shown(),
            pass: shown.matches(&cell.d),
            computed,
        });
    }
    Ok(TableReport { cells })
}
