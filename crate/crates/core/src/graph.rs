//! Resolution dual graphs.
//!
//! A [`DualGraph`] has one vertex per exceptional curve of a minimal
//! resolution, weighted by `w = -C²`, and one edge per intersection point.
//! The family constructors build the chains, forks and three-armed stars
//! that occur for log terminal points, including the fifteen E-type shapes
//! parameterised by the central weight `μ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{integer, IntersectionMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    /// `-C²`; at least 2 on a minimal resolution.
    pub weight: u32,
    #[serde(default)]
    pub genus: u32,
}

impl Vertex {
    pub fn rational(id: impl Into<String>, weight: u32) -> Self {
        Vertex {
            id: id.into(),
            weight,
            genus: 0,
        }
    }
}

/// Weighted intersection graph of the exceptional curves over one point.
///
/// Edges are stored as index pairs `(i, j)` with `i <= j`, repeated once per
/// intersection point. A pair with `i == j` is a node of curve `i`.
/// Equality is labeled-graph equality: vertex order does not matter.
#[derive(Clone, Debug)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.id.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id.clone()));
            }
            if v.weight < 2 {
                return Err(Error::NotMinimal {
                    id: v.id.clone(),
                    weight: v.weight,
                });
            }
        }
        let n = vertices.len();
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(format!("#{}", a.max(b))));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        let graph = DualGraph {
            vertices,
            edges: normalized,
        };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    /// Builds a graph from edges given by vertex id.
    pub fn with_named_edges(vertices: Vec<Vertex>, edges: &[(&str, &str)]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        DualGraph::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Number of intersection points between curves `i` and `j` (`i != j`),
    /// or the number of nodes of curve `i` when `i == j`.
    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        let key = (i.min(j), i.max(j));
        self.edges.iter().filter(|&&e| e == key).count() as u32
    }

    pub fn nodes(&self, i: usize) -> u32 {
        self.multiplicity(i, i)
    }

    /// Arithmetic genus of curve `i`: geometric genus plus nodes.
    pub fn arithmetic_genus(&self, i: usize) -> u32 {
        self.vertices[i].genus + self.nodes(i)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (a == i, b == i) {
                (true, false) => Some(b),
                (false, true) => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    fn is_connected(&self) -> bool {
        let n = self.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Simple tree: no nodes, no multiple edges, no cycles.
    pub fn is_simple_tree(&self) -> bool {
        let mut pairs = self.edges.clone();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len() == self.edges.len()
            && self.edges.iter().all(|&(a, b)| a != b)
            && self.edges.len() + 1 == self.len()
    }

    /// Simple tree of smooth rational curves.
    pub fn is_rational_snc_tree(&self) -> bool {
        self.is_simple_tree() && self.vertices.iter().all(|v| v.genus == 0)
    }

    /// Diagonal `-w_i`, off-diagonal `m_ij`.
    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        IntersectionMatrix::from_integers(&self.intersection_matrix_integers())
            .expect("dual graph matrices are symmetric with non-negative off-diagonal")
    }

    pub(crate) fn intersection_matrix_integers(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            rows[i][i] = -(v.weight as i64);
        }
        for &(a, b) in &self.edges {
            if a != b {
                rows[a][b] += 1;
                rows[b][a] += 1;
            }
        }
        rows
    }

    /// `C_i² + 2 - 2 p_a(C_i)` for every curve: the right-hand side of the
    /// adjunction system `Δ·C_i = -K·C_i`.
    pub fn adjunction_rhs(&self) -> Vec<Rational> {
        self.adjunction_rhs_integers().into_iter().map(integer).collect()
    }

    pub(crate) fn adjunction_rhs_integers(&self) -> Vec<i64> {
        (0..self.len())
            .map(|i| {
                let w = self.vertices[i].weight as i64;
                2 - w - 2 * self.arithmetic_genus(i) as i64
            })
            .collect()
    }

    fn canonical(&self) -> (Vec<Vertex>, Vec<(String, String)>) {
        let mut vertices = self.vertices.clone();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (&self.vertices[a].id, &self.vertices[b].id);
                if x <= y {
                    (x.clone(), y.clone())
                } else {
                    (y.clone(), x.clone())
                }
            })
            .collect();
        edges.sort();
        (vertices, edges)
    }

    /// Canonical JSON document: vertices sorted by id, edges sorted
    /// lexicographically with each pair in ascending order.
    pub fn to_json(&self) -> String {
        let (vertices, edges) = self.canonical();
        let doc = GraphDocument { vertices, edges };
        serde_json::to_string(&doc).expect("graph documents always serialize")
    }

    /// Parses a graph document (`{"vertices": [...], "edges": [[a, b], ...]}`).
    pub fn parse(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::GraphSyntax(e.to_string()))?;
        DualGraph::from_document(doc)
    }

    pub(crate) fn from_document(doc: GraphDocument) -> Result<Self> {
        let edges: Vec<(&str, &str)> = doc
            .edges
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        DualGraph::with_named_edges(doc.vertices, &edges)
    }
}

impl PartialEq for DualGraph {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for DualGraph {}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct GraphDocument {
    pub(crate) vertices: Vec<Vertex>,
    #[serde(default)]
    pub(crate) edges: Vec<(String, String)>,
}

/// Free-function form of [`DualGraph::parse`].
pub fn parse_graph(text: &str) -> Result<DualGraph> {
    DualGraph::parse(text)
}

fn chain_ids(prefix: &str, len: usize) -> Vec<String> {
    (1..=len).map(|i| format!("{prefix}{i}")).collect()
}

fn check_weights(ids: &[String], weights: &[u32]) -> Result<()> {
    for (id, &w) in ids.iter().zip(weights) {
        if w < 2 {
            return Err(Error::NotMinimal {
                id: id.clone(),
                weight: w,
            });
        }
    }
    Ok(())
}

/// Chain `C1 - C2 - ... - Cn` with the given weights.
pub fn make_an(weights: &[u32]) -> Result<DualGraph> {
    if weights.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let ids = chain_ids("C", weights.len());
    check_weights(&ids, weights)?;
    let vertices = ids
        .into_iter()
        .zip(weights)
        .map(|(id, &w)| Vertex::rational(id, w))
        .collect();
    let edges = (1..weights.len()).map(|i| (i - 1, i)).collect();
    DualGraph::new(vertices, edges)
}

/// Chain `C1 - ... - C_{n-2}` with two leaves `C'1`, `C''1` on the last
/// chain vertex.
pub fn make_dn(chain: &[u32], w_prime: u32, w_dprime: u32) -> Result<DualGraph> {
    if chain.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut ids = chain_ids("C", chain.len());
    ids.push("C'1".into());
    ids.push("C''1".into());
    let mut weights = chain.to_vec();
    weights.extend([w_prime, w_dprime]);
    check_weights(&ids, &weights)?;
    let k = chain.len();
    let vertices = ids
        .into_iter()
        .zip(&weights)
        .map(|(id, &w)| Vertex::rational(id, w))
        .collect();
    let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    edges.push((k - 1, k));
    edges.push((k - 1, k + 1));
    DualGraph::new(vertices, edges)
}

/// Star with central curve `C0` of weight `center` and three arms named
/// `C`, `C'`, `C''`. Each arm lists its weights from the outer end towards
/// the center, so `C1` is the outer leaf and the last entry meets `C0`.
pub fn make_star(center: u32, arms: [&[u32]; 3]) -> Result<DualGraph> {
    if arms.iter().any(|a| a.is_empty()) {
        return Err(Error::InvalidInput("star arms must be nonempty".into()));
    }
    let mut ids = vec!["C0".to_string()];
    let mut weights = vec![center];
    let mut edges = Vec::new();
    for (prefix, arm) in ["C", "C'", "C''"].iter().zip(arms) {
        let start = ids.len();
        ids.extend(chain_ids(prefix, arm.len()));
        weights.extend_from_slice(arm);
        for i in 1..arm.len() {
            edges.push((start + i - 1, start + i));
        }
        edges.push((0, start + arm.len() - 1));
    }
    check_weights(&ids, &weights)?;
    let vertices = ids
        .into_iter()
        .zip(&weights)
        .map(|(id, &w)| Vertex::rational(id, w))
        .collect();
    DualGraph::new(vertices, edges)
}

/// Direction in which a tuple lists an arm's weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArmOrder {
    /// First entry is the outer leaf `C1`.
    OuterFirst,
    /// First entry is the curve meeting the center.
    InnerFirst,
}

struct EnShape {
    arm_a: &'static [u32],
    arm_b: &'static [u32],
    order_a: ArmOrder,
    order_b: ArmOrder,
}

const fn shape(arm_a: &'static [u32], arm_b: &'static [u32]) -> EnShape {
    EnShape {
        arm_a,
        arm_b,
        order_a: ArmOrder::OuterFirst,
        order_b: ArmOrder::OuterFirst,
    }
}

/// Tuple data `(μ; arm A; arm B)` of the fifteen E-types; the third arm is a
/// single (-2)-curve. Orientation is the one whose δ_x matches the closed
/// forms (see `tests::en_orientation_is_forced`).
const EN_SHAPES: [EnShape; 15] = [
    shape(&[2, 2], &[2, 2]),
    shape(&[2, 2], &[3]),
    shape(&[3], &[3]),
    shape(&[2, 2, 2], &[2, 2]),
    shape(&[2, 2, 2], &[3]),
    shape(&[4], &[2, 2]),
    shape(&[4], &[3]),
    shape(&[2, 2, 2, 2], &[2, 2]),
    shape(&[2, 2, 2, 2], &[3]),
    shape(&[2, 3], &[2, 2]),
    shape(&[2, 3], &[3]),
    shape(&[3, 2], &[2, 2]),
    shape(&[3, 2], &[3]),
    shape(&[5], &[2, 2]),
    shape(&[5], &[3]),
];

/// One of the fifteen E-type star shapes with central weight `mu`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnTypeDescriptor {
    type_id: u8,
    mu: u32,
}

impl EnTypeDescriptor {
    pub fn new(type_id: u32, mu: u32) -> Result<Self> {
        if !(1..=15).contains(&type_id) {
            return Err(Error::InvalidEnType(format!(
                "type id {type_id} is not in 1..=15"
            )));
        }
        if mu < 2 {
            return Err(Error::InvalidEnType(format!("central weight {mu} < 2")));
        }
        Ok(EnTypeDescriptor {
            type_id: type_id as u8,
            mu,
        })
    }

    pub fn type_id(&self) -> u32 {
        self.type_id as u32
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    fn shape(&self) -> &'static EnShape {
        &EN_SHAPES[self.type_id as usize - 1]
    }

    /// Weights of arm `C`, as written in the tuple.
    pub fn arm_a(&self) -> &'static [u32] {
        self.shape().arm_a
    }

    /// Weights of arm `C'`, as written in the tuple.
    pub fn arm_b(&self) -> &'static [u32] {
        self.shape().arm_b
    }

    /// Tuple notation, e.g. `(3;2,2;3)`.
    pub fn notation(&self) -> String {
        let join = |a: &[u32]| {
            a.iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("({};{};{})", self.mu, join(self.arm_a()), join(self.arm_b()))
    }
}

fn oriented(weights: &[u32], order: ArmOrder) -> Vec<u32> {
    match order {
        ArmOrder::OuterFirst => weights.to_vec(),
        ArmOrder::InnerFirst => weights.iter().rev().copied().collect(),
    }
}

/// E-type star with an explicit reading of the two tuple arms.
pub fn make_en_oriented(
    desc: &EnTypeDescriptor,
    order_a: ArmOrder,
    order_b: ArmOrder,
) -> Result<DualGraph> {
    let a = oriented(desc.arm_a(), order_a);
    let b = oriented(desc.arm_b(), order_b);
    make_star(desc.mu, [&a, &b, &[2]])
}

pub fn make_en(desc: &EnTypeDescriptor) -> Result<DualGraph> {
    let shape = desc.shape();
    make_en_oriented(desc, shape.order_a, shape.order_b)
}

/// Dynkin graph `E_6`, `E_7` or `E_8` (all weights 2).
pub fn make_dynkin_e(n: u32) -> Result<DualGraph> {
    let type_id = match n {
        6 => 1,
        7 => 4,
        8 => 8,
        _ => return Err(Error::InvalidInput(format!("no Dynkin diagram E_{n}"))),
    };
    make_en(&EnTypeDescriptor::new(type_id, 2)?)
}

/// Per-id weight map; handy for tests and reports.
pub fn weight_map(g: &DualGraph) -> BTreeMap<String, u32> {
    g.vertices()
        .iter()
        .map(|v| (v.id.clone(), v.weight))
        .collect()
}
