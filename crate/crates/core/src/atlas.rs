//! Exhaustive enumeration of small weighted trees of chain, fork and
//! three-armed star shape, with a certifier for the bound `δ_x <= 2`.
//!
//! Shapes partition the trees they cover:
//!
//! * `chain`: a path, up to reversal;
//! * `fork`: one branch vertex carrying at least two single-vertex arms,
//!   built as `make_dn(chain, w', w'')` with a chain of length >= 2;
//! * `star3`: one branch vertex whose arms all have length >= 1, at most one
//!   of them of length 1.
//!
//! Stars with four or more arms are not enumerated. Duplicates are removed by
//! keeping the lexicographically least weight sequence in each symmetry
//! orbit.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::cycles::{self, SingularityKind};
use crate::error::{Error, Result};
use crate::graph::{make_an, make_dn, make_star, DualGraph};
use crate::lattice::integer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Chain,
    Fork,
    Star3,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Chain, Shape::Fork, Shape::Star3];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Chain => "chain",
            Shape::Fork => "fork",
            Shape::Star3 => "star3",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "chain" => Ok(Shape::Chain),
            "fork" => Ok(Shape::Fork),
            "star3" => Ok(Shape::Star3),
            other => Err(Error::InvalidSpec(format!("unknown shape {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationSpec {
    pub max_vertices: usize,
    pub max_weight: u32,
    pub shapes: Vec<Shape>,
}

impl EnumerationSpec {
    pub fn new(max_vertices: usize, max_weight: u32, shapes: &[Shape]) -> Result<Self> {
        if max_vertices < 1 {
            return Err(Error::InvalidSpec("max_vertices must be at least 1".into()));
        }
        if max_weight < 2 {
            return Err(Error::InvalidSpec("max_weight must be at least 2".into()));
        }
        let mut shapes = shapes.to_vec();
        shapes.sort();
        shapes.dedup();
        Ok(EnumerationSpec {
            max_vertices,
            max_weight,
            shapes,
        })
    }
}

/// Weights of an enumerated tree in its shape's own layout. Arms are listed
/// from the outer end toward the branch vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signature {
    Chain(Vec<u32>),
    Fork { chain: Vec<u32>, leaves: [u32; 2] },
    Star3 { center: u32, arms: [Vec<u32>; 3] },
}

fn join(ws: &[u32]) -> String {
    ws.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Chain(w) => f.write_str(&join(w)),
            Signature::Fork { chain, leaves } => {
                write!(f, "{};{}", join(chain), join(leaves))
            }
            Signature::Star3 { center, arms } => write!(
                f,
                "{center};{};{};{}",
                join(&arms[0]),
                join(&arms[1]),
                join(&arms[2])
            ),
        }
    }
}

impl Signature {
    pub fn shape(&self) -> Shape {
        match self {
            Signature::Chain(_) => Shape::Chain,
            Signature::Fork { .. } => Shape::Fork,
            Signature::Star3 { .. } => Shape::Star3,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Signature::Chain(w) => w.len(),
            Signature::Fork { chain, .. } => chain.len() + 2,
            Signature::Star3 { arms, .. } => 1 + arms.iter().map(Vec::len).sum::<usize>(),
        }
    }

    pub fn all_weights_two(&self) -> bool {
        match self {
            Signature::Chain(w) => w.iter().all(|&x| x == 2),
            Signature::Fork { chain, leaves } => {
                chain.iter().chain(leaves).all(|&x| x == 2)
            }
            Signature::Star3 { center, arms } => {
                *center == 2 && arms.iter().flatten().all(|&x| x == 2)
            }
        }
    }

    pub fn graph(&self) -> Result<DualGraph> {
        match self {
            Signature::Chain(w) => make_an(w),
            Signature::Fork { chain, leaves } => make_dn(chain, leaves[0], leaves[1]),
            Signature::Star3 { center, arms } => make_star(*center, [&arms[0], &arms[1], &arms[2]]),
        }
    }
}

/// All tuples in `[lo, hi]^len` in lexicographic order.
struct Tuples {
    lo: u32,
    hi: u32,
    next: Option<Vec<u32>>,
}

impl Tuples {
    fn new(len: usize, lo: u32, hi: u32) -> Self {
        Tuples {
            lo,
            hi,
            next: Some(vec![lo; len]),
        }
    }
}

impl Iterator for Tuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            if succ[k] < self.hi {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = self.lo;
        }
        Some(current)
    }
}

fn chains(n: usize, w: u32) -> impl Iterator<Item = Signature> {
    Tuples::new(n, 2, w).filter_map(|t| {
        let rev: Vec<u32> = t.iter().rev().copied().collect();
        (t <= rev).then_some(Signature::Chain(t))
    })
}

fn forks(n: usize, w: u32) -> impl Iterator<Item = Signature> {
    let k = n.saturating_sub(2);
    let tuples = (n >= 4).then(|| Tuples::new(n, 2, w));
    tuples.into_iter().flatten().filter_map(move |t| {
        let (a, b) = (t[k], t[k + 1]);
        // With a chain of two, the three leaves around C2 are interchangeable.
        let ok = a <= b && (k > 2 || t[0] <= a);
        ok.then(|| Signature::Fork {
            chain: t[..k].to_vec(),
            leaves: [a, b],
        })
    })
}

/// Arm length triples `l1 <= l2 <= l3` with `l2 >= 2` summing to `n - 1`.
fn star_lengths(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    if n < 6 {
        return out;
    }
    let total = n - 1;
    for l1 in 1..=total {
        for l2 in l1.max(2)..=total {
            if l1 + l2 > total {
                break;
            }
            let l3 = total - l1 - l2;
            if l3 >= l2 {
                out.push([l1, l2, l3]);
            }
        }
    }
    out
}

fn stars(n: usize, w: u32) -> impl Iterator<Item = Signature> {
    star_lengths(n).into_iter().flat_map(move |lens| {
        Tuples::new(n, 2, w).filter_map(move |t| {
            let center = t[0];
            let a = t[1..1 + lens[0]].to_vec();
            let b = t[1 + lens[0]..1 + lens[0] + lens[1]].to_vec();
            let c = t[1 + lens[0] + lens[1]..].to_vec();
            let ordered = (lens[0] != lens[1] || a <= b) && (lens[1] != lens[2] || b <= c);
            ordered.then_some(Signature::Star3 {
                center,
                arms: [a, b, c],
            })
        })
    })
}

/// Every signature of `spec`, grouped by shape and then by vertex count, in
/// lexicographic weight order within each group.
pub fn signatures(spec: &EnumerationSpec) -> impl Iterator<Item = Signature> + '_ {
    spec.shapes.iter().flat_map(move |&shape| {
        (1..=spec.max_vertices).flat_map(move |n| -> Box<dyn Iterator<Item = Signature>> {
            let w = spec.max_weight;
            match shape {
                Shape::Chain => Box::new(chains(n, w)),
                Shape::Fork => Box::new(forks(n, w)),
                Shape::Star3 => Box::new(stars(n, w)),
            }
        })
    })
}

#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub signature: Signature,
    pub graph: DualGraph,
}

impl AtlasEntry {
    pub fn shape(&self) -> Shape {
        self.signature.shape()
    }
}

/// Deterministic stream of the graphs of `spec`.
pub fn enumerate(spec: &EnumerationSpec) -> impl Iterator<Item = AtlasEntry> + '_ {
    signatures(spec).map(|signature| {
        let graph = signature
            .graph()
            .expect("enumerated weights are valid family parameters");
        AtlasEntry { signature, graph }
    })
}

/// Number of chains with `n` vertices and weights in `[2, max_weight]`, up to
/// reversal.
pub fn chain_count(n: usize, max_weight: u32) -> u64 {
    let w = (max_weight - 1) as u64;
    (w.pow(n as u32) + w.pow(n.div_ceil(2) as u32)) / 2
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShapeCounts {
    pub total: u64,
    pub excluded: u64,
    pub rational_double_points: u64,
    pub log_terminal: u64,
    pub not_log_terminal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub shape: Shape,
    pub signature: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub spec: EnumerationSpec,
    pub counts: BTreeMap<Shape, ShapeCounts>,
    /// Graphs skipped because their matrix is not negative definite.
    pub excluded: Vec<Finding>,
    /// Equality cases `δ_x = 2`.
    pub equality_cases: u64,
    pub violations: Vec<Finding>,
}

impl CertifyReport {
    pub fn total(&self) -> u64 {
        self.counts.values().map(|c| c.total).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (shape, c) in &self.counts {
            out.push_str(&format!(
                "{shape}: {} graphs, {} excluded (not negative definite), {} rational double points, {} log terminal, {} not log terminal\n",
                c.total, c.excluded, c.rational_double_points, c.log_terminal, c.not_log_terminal
            ));
        }
        out.push_str(&format!("equality cases (delta_x = 2): {}\n", self.equality_cases));
        for v in &self.violations {
            out.push_str(&format!("VIOLATION {} {}: {}\n", v.shape, v.signature, v.detail));
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{status}: {} graphs, {} violations\n",
            self.total(),
            self.violations.len()
        ));
        out
    }
}

/// Checks, for every enumerated log terminal graph (rational double points
/// included), that `δ_x <= 2` with equality exactly when all weights are 2.
pub fn certify_prop1(spec: &EnumerationSpec) -> CertifyReport {
    let two = integer(2);
    let mut counts: BTreeMap<Shape, ShapeCounts> =
        spec.shapes.iter().map(|&s| (s, ShapeCounts::default())).collect();
    let mut excluded = Vec::new();
    let mut violations = Vec::new();
    let mut equality_cases = 0;

    for entry in enumerate(spec) {
        let shape = entry.shape();
        let c = counts.entry(shape).or_default();
        c.total += 1;
        let finding = |detail: String| Finding {
            shape,
            signature: entry.signature.to_string(),
            detail,
        };
        let (kind, delta_x) = match cycles::classify_kind(&entry.graph) {
            Ok(found) => found,
            Err(e) => {
                c.excluded += 1;
                excluded.push(finding(e.to_string()));
                continue;
            }
        };
        match kind {
            SingularityKind::RationalDoublePoint => c.rational_double_points += 1,
            SingularityKind::LogTerminal => c.log_terminal += 1,
            SingularityKind::NotLogTerminal => {
                c.not_log_terminal += 1;
                continue;
            }
            SingularityKind::Smooth => unreachable!("graphs are never smooth points"),
        }
        let all_two = entry.signature.all_weights_two();
        if delta_x > two {
            violations.push(finding(format!("delta_x = {delta_x} > 2")));
        } else if (delta_x == two) != all_two {
            violations.push(finding(format!(
                "delta_x = {delta_x} but all weights 2 is {all_two}"
            )));
        } else if all_two {
            equality_cases += 1;
        }
    }

    CertifyReport {
        spec: spec.clone(),
        counts,
        excluded,
        equality_cases,
        violations,
    }
}

/// One CSV row per graph: shape, weights, class, δ_x, fundamental cycle.
/// Graphs that are not negative definite get class `Excluded`.
pub fn write_csv<W: Write>(spec: &EnumerationSpec, out: W) -> Result<u64> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output: {e}"));
    writer
        .write_record(["shape", "weights", "class", "delta_x", "fundamental_cycle"])
        .map_err(io)?;
    let mut rows = 0;
    for entry in enumerate(spec) {
        let record = match cycles::classify_graph(&entry.graph) {
            Ok(class) => {
                let z = class
                    .fundamental_cycle
                    .as_ref()
                    .map(|z| z.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default();
                [
                    entry.shape().to_string(),
                    entry.signature.to_string(),
                    class.kind.to_string(),
                    class.delta_x.to_string(),
                    z,
                ]
            }
            Err(_) => [
                entry.shape().to_string(),
                entry.signature.to_string(),
                "Excluded".into(),
                String::new(),
                String::new(),
            ],
        };
        writer.write_record(&record).map_err(io)?;
        rows += 1;
    }
    writer.flush().map_err(|e| Error::InvalidInput(format!("csv output: {e}")))?;
    Ok(rows)
}
