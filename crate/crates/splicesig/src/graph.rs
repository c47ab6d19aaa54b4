//! The splice-diagram data model: vertices, weighted edges, serialization,
//! structural validation and the basic combinatorial quantities (linking
//! numbers, multiplicities, vertex weights).
//!
//! A splice diagram is a finite tree whose ordinary vertices are either nodes
//! (valency >= 3) or leaves (valency 1), plus arrowhead vertices (valency 1)
//! carrying a non-negative integer multiplicity. Every edge end carries a
//! positive integer weight; ends at leaves and arrowheads always carry
//! weight 1, and weights around a node are pairwise coprime with at most two
//! of them greater than 1 (the condition for the ambient manifold to be S^3).

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Node,
    Leaf,
    Arrowhead,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    /// Present exactly when `kind` is [`VertexKind::Arrowhead`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u64>,
}

impl Vertex {
    pub fn node(id: impl Into<String>) -> Self {
        Vertex { id: id.into(), kind: VertexKind::Node, multiplicity: None }
    }

    pub fn leaf(id: impl Into<String>) -> Self {
        Vertex { id: id.into(), kind: VertexKind::Leaf, multiplicity: None }
    }

    pub fn arrowhead(id: impl Into<String>, multiplicity: u64) -> Self {
        Vertex { id: id.into(), kind: VertexKind::Arrowhead, multiplicity: Some(multiplicity) }
    }
}

/// An edge with a weight near each end: `weights[i]` is the weight adjacent
/// to `ends[i]`. Omitted weights in the JSON input mean `[1, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub ends: [String; 2],
    #[serde(default = "unit_weights")]
    pub weights: [u64; 2],
}

fn unit_weights() -> [u64; 2] {
    [1, 1]
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, weight_a: u64, weight_b: u64) -> Self {
        Edge { ends: [a.into(), b.into()], weights: [weight_a, weight_b] }
    }
}

/// An immutable splice diagram in canonical order: vertices sorted by id,
/// edge ends sorted within each edge, edges sorted by their end pair. Two
/// diagrams compare equal iff they have identical vertex and edge data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct SpliceDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl TryFrom<RawDiagram> for SpliceDiagram {
    type Error = Error;

    fn try_from(raw: RawDiagram) -> Result<Self> {
        SpliceDiagram::new(raw.vertices, raw.edges)
    }
}

/// One attachment of an edge at a vertex, seen from that vertex.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Arm {
    pub edge: usize,
    pub other: usize,
    pub weight_here: u64,
    pub weight_there: u64,
}

impl SpliceDiagram {
    /// Builds a diagram, enforcing the schema-level invariants: unique vertex
    /// ids, edge ends referring to existing distinct vertices, multiplicity
    /// present exactly on arrowheads. Structural rules (tree shape, valency,
    /// weight positivity, coprimality) are the business of [`Self::validate`].
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Self> {
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in vertices.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::Parse(format!("duplicate vertex id \"{}\"", pair[0].id)));
            }
        }
        for v in &vertices {
            match (v.kind, v.multiplicity) {
                (VertexKind::Arrowhead, None) => {
                    return Err(Error::Parse(format!(
                        "arrowhead \"{}\" is missing its multiplicity",
                        v.id
                    )))
                }
                (VertexKind::Node | VertexKind::Leaf, Some(_)) => {
                    return Err(Error::Parse(format!(
                        "vertex \"{}\" is not an arrowhead but carries a multiplicity",
                        v.id
                    )))
                }
                _ => {}
            }
        }
        let find = |id: &str| vertices.binary_search_by(|v| v.id.as_str().cmp(id));
        for (i, e) in edges.iter_mut().enumerate() {
            if e.ends[0] == e.ends[1] {
                return Err(Error::Parse(format!(
                    "edge {} has identical ends \"{}\"",
                    i, e.ends[0]
                )));
            }
            for end in &e.ends {
                if find(end).is_err() {
                    return Err(Error::Parse(format!(
                        "edge {} references unknown vertex id \"{}\"",
                        i, end
                    )));
                }
            }
            if e.ends[0] > e.ends[1] {
                e.ends.swap(0, 1);
                e.weights.swap(0, 1);
            }
        }
        edges.sort_by(|a, b| a.ends.cmp(&b.ends).then(a.weights.cmp(&b.weights)));
        Ok(SpliceDiagram { vertices, edges })
    }

    /// Parses the canonical JSON schema. Round trip: `parse(serialize(d)) = d`
    /// and `serialize(parse(x))` is canonical.
    pub fn parse(input: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(input)?)
    }

    /// Canonical JSON serialization (sorted vertices/edges, explicit weights).
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serialization cannot fail")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok()
    }

    pub(crate) fn require_index(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::Domain(format!("no vertex with id \"{id}\" in diagram")))
    }

    pub fn arrowheads(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Arrowhead)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Node)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.kind == VertexKind::Leaf)
    }

    /// Indices into `edges()` of the edges connecting two nodes.
    pub fn node_node_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edge_vertex_indices(e);
                self.vertices[a].kind == VertexKind::Node && self.vertices[b].kind == VertexKind::Node
            })
            .collect()
    }

    pub(crate) fn edge_vertex_indices(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (
            self.index_of(&edge.ends[0]).expect("edge ends are checked at construction"),
            self.index_of(&edge.ends[1]).expect("edge ends are checked at construction"),
        )
    }

    /// Per-vertex arm lists, index-aligned with `vertices()`.
    pub(crate) fn adjacency(&self) -> Vec<Vec<Arm>> {
        let mut arms: Vec<Vec<Arm>> = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            let (a, b) = self.edge_vertex_indices(k);
            arms[a].push(Arm { edge: k, other: b, weight_here: e.weights[0], weight_there: e.weights[1] });
            arms[b].push(Arm { edge: k, other: a, weight_here: e.weights[1], weight_there: e.weights[0] });
        }
        arms
    }

    /// Vertices and edges of the unique simple path from `from` to `to`
    /// (inclusive), or `None` if the diagram is disconnected.
    pub(crate) fn path(
        &self,
        adj: &[Vec<Arm>],
        from: usize,
        to: usize,
    ) -> Option<(Vec<usize>, Vec<bool>)> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for arm in &adj[v] {
                if !seen[arm.other] {
                    seen[arm.other] = true;
                    parent[arm.other] = Some((v, arm.edge));
                    queue.push_back(arm.other);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut on_path_edge = vec![false; self.edges.len()];
        let mut verts = vec![to];
        let mut cur = to;
        while let Some((prev, edge)) = parent[cur] {
            on_path_edge[edge] = true;
            verts.push(prev);
            cur = prev;
        }
        Some((verts, on_path_edge))
    }

    /// Linking number of two distinct vertices: the product of all edge-end
    /// weights attached to vertices of the `v`-`w` path but not lying on the
    /// path's edges. Always a positive integer.
    pub fn linking_number(&self, v: &str, w: &str) -> Result<BigInt> {
        let (vi, wi) = (self.require_index(v)?, self.require_index(w)?);
        if vi == wi {
            return Err(Error::Domain(format!("linking number requires distinct vertices, got \"{v}\" twice")));
        }
        let adj = self.adjacency();
        self.linking_number_idx(&adj, vi, wi)
    }

    pub(crate) fn linking_number_idx(&self, adj: &[Vec<Arm>], vi: usize, wi: usize) -> Result<BigInt> {
        let (verts, on_path) = self
            .path(adj, vi, wi)
            .ok_or_else(|| Error::Domain("diagram is disconnected; linking number undefined".into()))?;
        let mut product = BigInt::one();
        for &u in &verts {
            for arm in &adj[u] {
                if !on_path[arm.edge] {
                    product *= arm.weight_here;
                }
            }
        }
        Ok(product)
    }

    /// Multiplicity of a vertex: the label for an arrowhead, and the weighted
    /// sum over arrowheads `a` of `m_a * lk(a, v)` for nodes and leaves.
    pub fn vertex_multiplicity(&self, v: &str) -> Result<BigInt> {
        let vi = self.require_index(v)?;
        let adj = self.adjacency();
        self.vertex_multiplicity_idx(&adj, vi)
    }

    pub(crate) fn vertex_multiplicity_idx(&self, adj: &[Vec<Arm>], vi: usize) -> Result<BigInt> {
        if self.vertices[vi].kind == VertexKind::Arrowhead {
            return Ok(BigInt::from(self.vertices[vi].multiplicity.unwrap_or(0)));
        }
        let mut total = BigInt::zero();
        for (ai, a) in self.vertices.iter().enumerate() {
            if a.kind != VertexKind::Arrowhead {
                continue;
            }
            let m = a.multiplicity.unwrap_or(0);
            if m == 0 {
                continue;
            }
            total += self.linking_number_idx(adj, ai, vi)? * m;
        }
        Ok(total)
    }

    /// Weight `d_v` of a vertex: the product of all adjacent edge-end weights
    /// for a node, and `d_w / d_we^2` for a leaf or arrowhead with nearest
    /// node `w` and nearest weight `d_we`. Not necessarily an integer.
    pub fn vertex_weight(&self, v: &str) -> Result<Rational> {
        let vi = self.require_index(v)?;
        let adj = self.adjacency();
        self.vertex_weight_idx(&adj, vi)
    }

    pub(crate) fn vertex_weight_idx(&self, adj: &[Vec<Arm>], vi: usize) -> Result<Rational> {
        match self.vertices[vi].kind {
            VertexKind::Node => {
                let mut product = BigInt::one();
                for arm in &adj[vi] {
                    product *= arm.weight_here;
                }
                Ok(Rational::from_integer(product))
            }
            VertexKind::Leaf | VertexKind::Arrowhead => {
                let (ni, d_we) = self.nearest_idx(adj, vi)?;
                if self.vertices[ni].kind != VertexKind::Node {
                    return Err(Error::Domain(format!(
                        "vertex \"{}\" is not attached to a node; its weight is undefined",
                        self.vertices[vi].id
                    )));
                }
                let mut product = BigInt::one();
                for arm in &adj[ni] {
                    product *= arm.weight_here;
                }
                Ok(Rational::new(product, BigInt::from(d_we) * d_we))
            }
        }
    }

    /// Nearest node and nearest weight of a leaf or arrowhead: the unique
    /// adjacent vertex together with the edge weight at that vertex's end.
    pub fn nearest(&self, v: &str) -> Result<(&str, u64)> {
        let vi = self.require_index(v)?;
        if self.vertices[vi].kind == VertexKind::Node {
            return Err(Error::Domain(format!(
                "nearest node is defined for leaves and arrowheads only; \"{v}\" is a node"
            )));
        }
        let adj = self.adjacency();
        let (ni, w) = self.nearest_idx(&adj, vi)?;
        Ok((self.vertices[ni].id.as_str(), w))
    }

    pub(crate) fn nearest_idx(&self, adj: &[Vec<Arm>], vi: usize) -> Result<(usize, u64)> {
        match adj[vi].as_slice() {
            [arm] => Ok((arm.other, arm.weight_there)),
            arms => Err(Error::Domain(format!(
                "vertex \"{}\" has valency {}, expected 1",
                self.vertices[vi].id,
                arms.len()
            ))),
        }
    }

    /// Vertex indices of the subtree reached from `root` through `arm`,
    /// without crossing back over `arm.edge`.
    pub(crate) fn subtree_beyond(&self, adj: &[Vec<Arm>], root: usize, arm: &Arm) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        seen[root] = true;
        seen[arm.other] = true;
        let mut out = vec![arm.other];
        let mut stack = vec![arm.other];
        while let Some(v) = stack.pop() {
            for a in &adj[v] {
                if a.edge != arm.edge && !seen[a.other] {
                    seen[a.other] = true;
                    out.push(a.other);
                    stack.push(a.other);
                }
            }
        }
        out
    }

    /// The multiplicity the arm of `node` would carry as an arrowhead after
    /// cutting: the weighted linking sum of the arrowheads beyond the arm,
    /// computed inside the far side. Evaluated without materializing the cut,
    /// by dividing `lk(a, node)` by the off-arm weight product at `node`.
    pub(crate) fn arm_cut_multiplicity(&self, adj: &[Vec<Arm>], node: usize, arm: &Arm) -> Result<BigInt> {
        let mut off_arm = BigInt::one();
        for a in &adj[node] {
            if a.edge != arm.edge {
                off_arm *= a.weight_here;
            }
        }
        let mut total = BigInt::zero();
        for ai in self.subtree_beyond(adj, node, arm) {
            let v = &self.vertices[ai];
            if v.kind != VertexKind::Arrowhead {
                continue;
            }
            let m = v.multiplicity.unwrap_or(0);
            if m == 0 {
                continue;
            }
            total += self.linking_number_idx(adj, ai, node)? * m;
        }
        let (quot, rem) = total.div_rem(&off_arm);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!(
                "cut multiplicity at node \"{}\" is not integral",
                self.vertices[node].id
            )));
        }
        Ok(quot)
    }

    /// Structural validation plus bad-leaf detection.
    pub fn validate(&self) -> ValidationReport {
        let mut errors = Vec::new();
        let adj = self.adjacency();

        if !self.vertices.iter().any(|v| v.kind == VertexKind::Node) {
            errors.push("diagram has no node; at least one node is required".to_string());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let valency = adj[i].len();
            match v.kind {
                VertexKind::Node if valency < 3 => errors.push(format!(
                    "node \"{}\" has valency {valency}; nodes must have valency >= 3 and no ordinary vertex may have valency 2",
                    v.id
                )),
                VertexKind::Leaf if valency != 1 => errors.push(format!(
                    "leaf \"{}\" has valency {valency}; leaves must have valency 1",
                    v.id
                )),
                VertexKind::Arrowhead if valency != 1 => errors.push(format!(
                    "arrowhead \"{}\" has valency {valency}; arrowheads must have valency 1",
                    v.id
                )),
                _ => {}
            }
        }

        if !self.vertices.is_empty() {
            let mut seen = vec![false; self.vertices.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut reached = 1;
            while let Some(v) = stack.pop() {
                for arm in &adj[v] {
                    if !seen[arm.other] {
                        seen[arm.other] = true;
                        reached += 1;
                        stack.push(arm.other);
                    }
                }
            }
            if reached != self.vertices.len() {
                errors.push(format!(
                    "diagram is disconnected: {reached} of {} vertices reachable",
                    self.vertices.len()
                ));
            } else if self.edges.len() + 1 != self.vertices.len() {
                errors.push(format!(
                    "diagram is not a tree: {} vertices with {} edges",
                    self.vertices.len(),
                    self.edges.len()
                ));
            }
        }

        for (k, e) in self.edges.iter().enumerate() {
            for (end, &w) in e.ends.iter().zip(&e.weights) {
                if w == 0 {
                    errors.push(format!("edge {k} has weight 0 near \"{end}\"; weights must be positive"));
                }
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if matches!(v.kind, VertexKind::Leaf | VertexKind::Arrowhead) {
                for arm in &adj[i] {
                    if arm.weight_here != 1 {
                        errors.push(format!(
                            "weight adjacent to {} \"{}\" is {}, must be 1",
                            match v.kind {
                                VertexKind::Leaf => "leaf",
                                _ => "arrowhead",
                            },
                            v.id,
                            arm.weight_here
                        ));
                    }
                }
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.kind != VertexKind::Node {
                continue;
            }
            let weights: Vec<u64> = adj[i].iter().map(|a| a.weight_here).collect();
            for (x, &wa) in weights.iter().enumerate() {
                for &wb in &weights[x + 1..] {
                    if wa > 0 && wb > 0 && wa.gcd(&wb) != 1 {
                        errors.push(format!(
                            "weights {wa} and {wb} adjacent to node \"{}\" are not coprime",
                            v.id
                        ));
                    }
                }
            }
            let big = weights.iter().filter(|&&w| w > 1).count();
            if big > 2 {
                errors.push(format!(
                    "node \"{}\" has {big} adjacent weights greater than 1; at most 2 are allowed for links in S^3",
                    v.id
                ));
            }
        }

        let mut bad_leaves = Vec::new();
        if errors.is_empty() {
            for (i, v) in self.vertices.iter().enumerate() {
                if v.kind != VertexKind::Leaf {
                    continue;
                }
                let arm = adj[i][0];
                if arm.weight_there != 1 {
                    continue;
                }
                if !self.splice_component_is_gamma1b(&adj, arm.other, i) {
                    bad_leaves.push(v.id.clone());
                }
            }
        }

        let is_link = self.arrowheads().next().is_some()
            && self.arrowheads().all(|a| a.multiplicity == Some(1));
        let arrowhead_count_nonzero =
            self.arrowheads().filter(|a| a.multiplicity.unwrap_or(0) != 0).count();
        let is_almost_minimal = errors.is_empty() && bad_leaves.is_empty();

        ValidationReport {
            structural_errors: errors,
            bad_leaves,
            is_almost_minimal,
            is_link,
            arrowhead_count_nonzero,
        }
    }

    /// Whether the splice component containing `node` has the shape of an
    /// elementary graph with unit leaf weight: valency 3, a single leaf
    /// (which is `leaf`, with nearest weight 1), two arms that decompose to
    /// unit-weight arrowheads, and at least one of those carrying
    /// multiplicity 1.
    fn splice_component_is_gamma1b(&self, adj: &[Vec<Arm>], node: usize, leaf: usize) -> bool {
        if adj[node].len() != 3 {
            return false;
        }
        let mut other_mults = Vec::new();
        for arm in &adj[node] {
            if arm.other == leaf {
                continue;
            }
            if arm.weight_here != 1 {
                return false;
            }
            match self.vertices[arm.other].kind {
                VertexKind::Leaf => return false,
                VertexKind::Arrowhead => {
                    other_mults.push(BigInt::from(self.vertices[arm.other].multiplicity.unwrap_or(0)))
                }
                VertexKind::Node => match self.arm_cut_multiplicity(adj, node, arm) {
                    Ok(m) => other_mults.push(m),
                    Err(_) => return false,
                },
            }
        }
        other_mults.len() == 2 && other_mults.iter().any(|m| m.is_one())
    }
}

/// Result of [`SpliceDiagram::validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Human-readable descriptions of every violated structural rule.
    pub structural_errors: Vec<String>,
    /// Leaves with nearest weight 1 whose splice component is not elementary
    /// of unit leaf weight.
    pub bad_leaves: Vec<String>,
    /// True iff there are no structural errors and no bad leaves.
    pub is_almost_minimal: bool,
    /// True iff the diagram has at least one arrowhead and every arrowhead
    /// multiplicity equals 1 (a genuine link rather than a multilink).
    pub is_link: bool,
    /// Number of arrowheads with non-zero multiplicity (the `#Gamma` entering
    /// the signature formulas).
    pub arrowhead_count_nonzero: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structural_errors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::testutil::example4;
    use proptest::prelude::*;

    #[test]
    fn example4_shape() {
        let d = example4();
        assert_eq!(d.vertices().len(), 7);
        assert_eq!(d.nodes().count(), 2);
        assert_eq!(d.leaves().count(), 3);
        assert_eq!(d.arrowheads().count(), 2);
        assert_eq!(d.edges().len(), 6);
        let report = d.validate();
        assert!(report.is_valid(), "{:?}", report.structural_errors);
        assert!(report.is_almost_minimal);
        assert!(report.is_link);
        assert_eq!(report.arrowhead_count_nonzero, 2);
    }

    #[test]
    fn example4_quantities() {
        let d = example4();
        assert_eq!(d.linking_number("a1", "a2").unwrap(), BigInt::from(12));
        assert_eq!(d.linking_number("a2", "a1").unwrap(), BigInt::from(12));
        assert_eq!(d.vertex_multiplicity("n1").unwrap(), BigInt::from(38));
        assert_eq!(d.vertex_multiplicity("n2").unwrap(), BigInt::from(18));
        assert_eq!(d.vertex_weight("n1").unwrap(), int(26));
        assert_eq!(d.vertex_weight("l1").unwrap(), rat(13, 2));
        assert_eq!(d.vertex_weight("l2").unwrap(), rat(2, 3));
        assert_eq!(d.nearest("a1").unwrap(), ("n1", 1));
        assert_eq!(d.nearest("l1").unwrap(), ("n1", 2));
        assert!(d.nearest("n1").is_err());
        assert!(d.linking_number("a1", "a1").is_err());
    }

    #[test]
    fn parse_round_trip() {
        let d = example4();
        let json = d.to_canonical_json();
        let back = SpliceDiagram::parse(json.as_bytes()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_canonical_json(), json);
    }

    #[test]
    fn default_weights_are_unit() {
        let json = r#"{
            "vertices": [
                {"id": "n", "kind": "node"},
                {"id": "p", "kind": "leaf"},
                {"id": "q", "kind": "leaf"},
                {"id": "a", "kind": "arrowhead", "multiplicity": 1}
            ],
            "edges": [
                {"ends": ["n", "p"], "weights": [2, 1]},
                {"ends": ["n", "q"], "weights": [3, 1]},
                {"ends": ["n", "a"]}
            ]
        }"#;
        let d = SpliceDiagram::parse(json.as_bytes()).unwrap();
        assert!(d.validate().is_valid());
        assert_eq!(d.vertex_multiplicity("n").unwrap(), BigInt::from(6));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(SpliceDiagram::parse(b"{").unwrap_err(), Error::Parse(_)));
        let dangling = r#"{"vertices": [{"id": "n", "kind": "node"}],
                           "edges": [{"ends": ["n", "ghost"]}]}"#;
        let err = SpliceDiagram::parse(dangling.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("ghost"), "{err}");
        let dup = r#"{"vertices": [{"id": "n", "kind": "node"}, {"id": "n", "kind": "leaf"}],
                      "edges": []}"#;
        assert!(SpliceDiagram::parse(dup.as_bytes()).is_err());
        let mult_on_leaf = r#"{"vertices": [{"id": "n", "kind": "leaf", "multiplicity": 1}],
                               "edges": []}"#;
        assert!(SpliceDiagram::parse(mult_on_leaf.as_bytes()).is_err());
        let no_mult = r#"{"vertices": [{"id": "a", "kind": "arrowhead"}], "edges": []}"#;
        assert!(SpliceDiagram::parse(no_mult.as_bytes()).is_err());
        let self_loop = r#"{"vertices": [{"id": "n", "kind": "node"}],
                            "edges": [{"ends": ["n", "n"]}]}"#;
        assert!(SpliceDiagram::parse(self_loop.as_bytes()).is_err());
    }

    #[test]
    fn unknot_figure_has_bad_leaf() {
        // A node with adjacent weights 1, p, q and a single arrowhead
        // represents an unknot but has non-zero S; its weight-1 leaf is bad.
        let d = SpliceDiagram::new(
            vec![
                Vertex::node("n"),
                Vertex::leaf("u"),
                Vertex::leaf("v"),
                Vertex::arrowhead("a", 1),
            ],
            vec![
                Edge::new("n", "u", 1, 1),
                Edge::new("n", "v", 3, 1),
                Edge::new("n", "a", 2, 1),
            ],
        )
        .unwrap();
        let report = d.validate();
        assert!(report.is_valid());
        assert_eq!(report.bad_leaves, vec!["u".to_string()]);
        assert!(!report.is_almost_minimal);
    }

    #[test]
    fn gamma_1b_leaf_is_not_bad() {
        // Node with a unit-weight leaf and two arrowheads: the elementary
        // shape itself, so the leaf is fine.
        let d = SpliceDiagram::new(
            vec![
                Vertex::node("n"),
                Vertex::leaf("l"),
                Vertex::arrowhead("a", 4),
                Vertex::arrowhead("b", 1),
            ],
            vec![
                Edge::new("n", "l", 1, 1),
                Edge::new("n", "a", 1, 1),
                Edge::new("n", "b", 1, 1),
            ],
        )
        .unwrap();
        let report = d.validate();
        assert!(report.is_valid());
        assert!(report.bad_leaves.is_empty());
        assert!(report.is_almost_minimal);
        assert!(!report.is_link, "multiplicity 4 arrowhead makes this a multilink");
    }

    #[test]
    fn structural_violations_reported() {
        let coprime = SpliceDiagram::new(
            vec![
                Vertex::node("n"),
                Vertex::leaf("u"),
                Vertex::leaf("v"),
                Vertex::arrowhead("a", 1),
            ],
            vec![
                Edge::new("n", "u", 2, 1),
                Edge::new("n", "v", 4, 1),
                Edge::new("n", "a", 1, 1),
            ],
        )
        .unwrap();
        let report = coprime.validate();
        assert!(report.structural_errors.iter().any(|e| e.contains("not coprime")));
        assert!(!report.is_almost_minimal);

        let zero_weight = SpliceDiagram::new(
            vec![
                Vertex::node("n"),
                Vertex::leaf("u"),
                Vertex::leaf("v"),
                Vertex::arrowhead("a", 1),
            ],
            vec![
                Edge::new("n", "u", 0, 1),
                Edge::new("n", "v", 3, 1),
                Edge::new("n", "a", 1, 1),
            ],
        )
        .unwrap();
        assert!(!zero_weight.validate().is_valid());

        let valency_two = SpliceDiagram::new(
            vec![Vertex::node("n"), Vertex::leaf("u"), Vertex::leaf("v")],
            vec![Edge::new("n", "u", 2, 1), Edge::new("n", "v", 3, 1)],
        )
        .unwrap();
        assert!(valency_two
            .validate()
            .structural_errors
            .iter()
            .any(|e| e.contains("valency")));
    }

    #[test]
    fn multiplicity_is_linear_in_arrowhead_labels() {
        let d = example4();
        let doubled = SpliceDiagram::new(
            d.vertices()
                .iter()
                .map(|v| match v.kind {
                    VertexKind::Arrowhead => Vertex::arrowhead(&v.id, v.multiplicity.unwrap() * 2),
                    _ => v.clone(),
                })
                .collect(),
            d.edges().to_vec(),
        )
        .unwrap();
        for node in ["n1", "n2"] {
            assert_eq!(
                doubled.vertex_multiplicity(node).unwrap(),
                d.vertex_multiplicity(node).unwrap() * 2
            );
        }
    }

    proptest! {
        #[test]
        fn prop_generated_diagrams_round_trip_and_link_symmetry(seed in 0u64..300) {
            let d = crate::ops::generate_random(seed, 5).unwrap();
            let report = d.validate();
            prop_assert!(report.is_valid());
            prop_assert!(report.is_almost_minimal);
            prop_assert!(report.is_link);

            let back = SpliceDiagram::parse(d.to_canonical_json().as_bytes()).unwrap();
            prop_assert_eq!(&back, &d);

            // linking number symmetry on a few vertex pairs
            let ids: Vec<&str> = d.vertices().iter().map(|v| v.id.as_str()).collect();
            for (i, &a) in ids.iter().enumerate() {
                for &b in ids.iter().skip(i + 1).take(3) {
                    prop_assert_eq!(
                        d.linking_number(a, b).unwrap(),
                        d.linking_number(b, a).unwrap()
                    );
                }
            }

            // every leaf and arrowhead hangs off a single edge with unit
            // weight at its own end
            let adj = d.adjacency();
            for (i, v) in d.vertices().iter().enumerate() {
                if v.kind != VertexKind::Node {
                    prop_assert_eq!(adj[i].len(), 1);
                    prop_assert_eq!(adj[i][0].weight_here, 1);
                }
            }
        }
    }
}
