//! Structural surgery on splice diagrams: cutting a node-node edge into two
//! half-diagrams with induced arrowhead multiplicities, splicing (the
//! inverse), decomposition into splice components, completion of multilink
//! arrowheads, constructors for the named diagram families and a seeded
//! random generator that only performs cabling moves (so every output is a
//! link in S^3 by construction).

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Arm, Edge, SpliceDiagram, Vertex, VertexKind};

/// Result of cutting a node-node edge.
///
/// Each side contains one new arrowhead replacing the cut edge; it carries
/// the inherited edge weight at the surviving node and weight 1 at its own
/// end. `mult_a` is the multiplicity of the new arrowhead on `side_a` (the
/// side of the edge's first endpoint), determined by preservation of node
/// multiplicities.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub side_a: SpliceDiagram,
    pub side_b: SpliceDiagram,
    pub mult_a: u64,
    pub mult_b: u64,
    /// 1 iff both new arrowheads have non-zero multiplicity; the correction
    /// term in the splice additivity of the average signature.
    pub eta: u8,
    /// Id of the new arrowhead in `side_a`.
    pub arrowhead_a: String,
    /// Id of the new arrowhead in `side_b`.
    pub arrowhead_b: String,
}

fn fresh_id(taken: &HashSet<&str>, base: String) -> String {
    let mut id = base;
    while taken.contains(id.as_str()) {
        id.push('\'');
    }
    id
}

/// Cuts the edge joining nodes `ends.0` and `ends.1`.
///
/// The multiplicity of the new arrowhead on one side is the weighted linking
/// sum of the other side's arrowheads, evaluated inside that other side; the
/// result is then asserted against the requirement that every node and leaf
/// multiplicity inside each side agrees with its value in the whole diagram.
pub fn cut_edge(d: &SpliceDiagram, ends: (&str, &str)) -> Result<CutResult> {
    let ai = d.require_index(ends.0)?;
    let bi = d.require_index(ends.1)?;
    for (idx, id) in [(ai, ends.0), (bi, ends.1)] {
        if d.vertices()[idx].kind != VertexKind::Node {
            return Err(Error::Domain(format!(
                "cut requires a node-node edge; \"{id}\" is not a node"
            )));
        }
    }
    let adj = d.adjacency();
    let arm_ab = adj[ai]
        .iter()
        .find(|arm| arm.other == bi)
        .copied()
        .ok_or_else(|| Error::Domain(format!("no edge between \"{}\" and \"{}\"", ends.0, ends.1)))?;
    let arm_ba = adj[bi].iter().find(|arm| arm.other == ai).copied().expect("mirror arm exists");

    let (side_a, name_a) = build_side(d, &adj, ai, &arm_ab)?;
    let (side_b, name_b) = build_side(d, &adj, bi, &arm_ba)?;

    let mult_a = induced_multiplicity(&side_b, &name_b)?;
    let mult_b = induced_multiplicity(&side_a, &name_a)?;

    // Dual route: the division form evaluated on the intact diagram must give
    // the same multiplicities.
    if BigInt::from(mult_a) != d.arm_cut_multiplicity(&adj, ai, &arm_ab)?
        || BigInt::from(mult_b) != d.arm_cut_multiplicity(&adj, bi, &arm_ba)?
    {
        return Err(Error::Invariant(format!(
            "cut multiplicities disagree between the side-local and division routes on edge ({}, {})",
            ends.0, ends.1
        )));
    }

    let side_a = set_multiplicity(side_a, &name_a, mult_a)?;
    let side_b = set_multiplicity(side_b, &name_b, mult_b)?;

    for side in [&side_a, &side_b] {
        for v in side.vertices() {
            if v.kind == VertexKind::Arrowhead {
                continue;
            }
            if side.vertex_multiplicity(&v.id)? != d.vertex_multiplicity(&v.id)? {
                return Err(Error::Invariant(format!(
                    "multiplicity of \"{}\" not preserved when cutting edge ({}, {})",
                    v.id, ends.0, ends.1
                )));
            }
        }
    }

    let eta = u8::from(mult_a != 0 && mult_b != 0);
    Ok(CutResult { side_a, side_b, mult_a, mult_b, eta, arrowhead_a: name_a, arrowhead_b: name_b })
}

/// Builds the side of `keep` after removing `arm`'s edge, with a fresh
/// placeholder arrowhead attached to `keep` by the inherited weight.
fn build_side(
    d: &SpliceDiagram,
    adj: &[Vec<Arm>],
    keep: usize,
    arm: &Arm,
) -> Result<(SpliceDiagram, String)> {
    let far_side: HashSet<usize> = d.subtree_beyond(adj, keep, arm).into_iter().collect();
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut member: HashSet<&str> = HashSet::new();
    for (i, v) in d.vertices().iter().enumerate() {
        if !far_side.contains(&i) {
            vertices.push(v.clone());
            member.insert(v.id.as_str());
        }
    }
    let keep_id = d.vertices()[keep].id.clone();
    let far_id = &d.vertices()[arm.other].id;
    let name = fresh_id(&member, format!("cut:{keep_id}:{far_id}"));
    let mut edges: Vec<Edge> = d
        .edges()
        .iter()
        .filter(|e| member.contains(e.ends[0].as_str()) && member.contains(e.ends[1].as_str()))
        .cloned()
        .collect();
    vertices.push(Vertex::arrowhead(name.clone(), 0));
    edges.push(Edge::new(keep_id, name.clone(), arm.weight_here, 1));
    Ok((SpliceDiagram::new(vertices, edges)?, name))
}

/// The multiplicity induced on the opposite side: the weighted linking sum
/// of this side's original arrowheads with its new arrowhead.
fn induced_multiplicity(side: &SpliceDiagram, new_arrowhead: &str) -> Result<u64> {
    let mut total = BigInt::zero();
    for a in side.arrowheads() {
        if a.id == new_arrowhead {
            continue;
        }
        let m = a.multiplicity.unwrap_or(0);
        if m == 0 {
            continue;
        }
        total += side.linking_number(new_arrowhead, &a.id)? * m;
    }
    total.to_u64().ok_or_else(|| {
        Error::Domain(format!("cut multiplicity {total} does not fit in 64 bits"))
    })
}

fn set_multiplicity(d: SpliceDiagram, arrowhead: &str, m: u64) -> Result<SpliceDiagram> {
    let vertices = d
        .vertices()
        .iter()
        .map(|v| if v.id == arrowhead { Vertex::arrowhead(&v.id, m) } else { v.clone() })
        .collect();
    SpliceDiagram::new(vertices, d.edges().to_vec())
}

/// Splices two diagrams along the arrowheads `a1` of `d1` and `a2` of `d2`.
///
/// Both arrowheads disappear and their nearest nodes become joined by an
/// edge carrying the two former near-node weights. The multiplicities must
/// match what cutting that edge would induce; this is checked by performing
/// the virtual cut on each input.
pub fn splice(d1: &SpliceDiagram, a1: &str, d2: &SpliceDiagram, a2: &str) -> Result<SpliceDiagram> {
    let (n1, w1) = splice_end(d1, a1)?;
    let (n2, w2) = splice_end(d2, a2)?;

    let expect1 = virtual_cut_multiplicity(d2, a2)?;
    let expect2 = virtual_cut_multiplicity(d1, a1)?;
    let m1 = BigInt::from(d1.vertex(a1).unwrap().multiplicity.unwrap_or(0));
    let m2 = BigInt::from(d2.vertex(a2).unwrap().multiplicity.unwrap_or(0));
    if m1 != expect1 || m2 != expect2 {
        return Err(Error::SpliceIncompatible(format!(
            "arrowhead \"{a1}\" has multiplicity {m1} but compatibility requires {expect1}; \
             arrowhead \"{a2}\" has multiplicity {m2} but compatibility requires {expect2}"
        )));
    }

    let mut vertices: Vec<Vertex> =
        d1.vertices().iter().filter(|v| v.id != a1).cloned().collect();
    let taken: HashSet<&str> = vertices.iter().map(|v| v.id.as_str()).collect();
    let rename: Vec<(String, String)> = d2
        .vertices()
        .iter()
        .filter(|v| v.id != a2)
        .map(|v| {
            let mut id = v.id.clone();
            while taken.contains(id.as_str()) {
                id.push('\'');
            }
            (v.id.clone(), id)
        })
        .collect();
    let renamed = |id: &str| -> String {
        rename
            .iter()
            .find(|(old, _)| old == id)
            .map(|(_, new)| new.clone())
            .expect("every surviving d2 vertex has a rename entry")
    };
    for v in d2.vertices() {
        if v.id != a2 {
            let mut v = v.clone();
            v.id = renamed(&v.id);
            vertices.push(v);
        }
    }
    let mut edges: Vec<Edge> = d1
        .edges()
        .iter()
        .filter(|e| e.ends[0] != a1 && e.ends[1] != a1)
        .cloned()
        .collect();
    for e in d2.edges() {
        if e.ends[0] == a2 || e.ends[1] == a2 {
            continue;
        }
        edges.push(Edge::new(renamed(&e.ends[0]), renamed(&e.ends[1]), e.weights[0], e.weights[1]));
    }
    edges.push(Edge::new(n1, renamed(&n2), w1, w2));
    SpliceDiagram::new(vertices, edges)
}

fn splice_end(d: &SpliceDiagram, a: &str) -> Result<(String, u64)> {
    let v = d
        .vertex(a)
        .ok_or_else(|| Error::Domain(format!("no vertex with id \"{a}\" in diagram")))?;
    if v.kind != VertexKind::Arrowhead {
        return Err(Error::Domain(format!("splice requires arrowheads; \"{a}\" is not one")));
    }
    let (node, w) = d.nearest(a)?;
    if d.vertex(node).unwrap().kind != VertexKind::Node {
        return Err(Error::Domain(format!(
            "arrowhead \"{a}\" is not attached to a node; cannot splice"
        )));
    }
    Ok((node.to_string(), w))
}

/// What multiplicity this diagram would force on a partner spliced at `a`:
/// the weighted linking sum of all other arrowheads with `a`.
fn virtual_cut_multiplicity(d: &SpliceDiagram, a: &str) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for other in d.arrowheads() {
        if other.id == a {
            continue;
        }
        let m = other.multiplicity.unwrap_or(0);
        if m == 0 {
            continue;
        }
        total += d.linking_number(a, &other.id)? * m;
    }
    Ok(total)
}

/// Decomposes a diagram into its splice components by cutting every
/// node-node edge. Each component has exactly one node; the multiset of
/// components does not depend on the cut order.
pub fn components(d: &SpliceDiagram) -> Result<Vec<SpliceDiagram>> {
    Ok(components_with_eta(d)?.0)
}

/// Splice components together with the accumulated eta correction: the
/// number of cut edges whose two induced multiplicities are both non-zero.
pub fn components_with_eta(d: &SpliceDiagram) -> Result<(Vec<SpliceDiagram>, u64)> {
    if d.nodes().next().is_none() {
        return Err(Error::Domain("cannot decompose a diagram with no node".into()));
    }
    let mut out = Vec::new();
    let mut eta = 0u64;
    let mut work = vec![d.clone()];
    while let Some(g) = work.pop() {
        match g.node_node_edges().first() {
            None => out.push(g),
            Some(&e) => {
                let edge = &g.edges()[e];
                let cut = cut_edge(&g, (&edge.ends[0], &edge.ends[1]))?;
                eta += u64::from(cut.eta);
                work.push(cut.side_a);
                work.push(cut.side_b);
            }
        }
    }
    out.sort_by(|a, b| a.to_canonical_json().cmp(&b.to_canonical_json()));
    Ok((out, eta))
}

/// The elementary diagram: one node, a leaf with near-node weight `a`, and
/// two unit-weight arrowheads of multiplicities `b` and 1. Its node has
/// multiplicity `a(b+1)`.
pub fn elementary(a: u64, b: u64) -> Result<SpliceDiagram> {
    if a < 1 {
        return Err(Error::Domain(format!("elementary diagram requires a >= 1, got {a}")));
    }
    SpliceDiagram::new(
        vec![
            Vertex::node("n"),
            Vertex::leaf("l"),
            Vertex::arrowhead("ab", b),
            Vertex::arrowhead("a1", 1),
        ],
        vec![
            Edge::new("n", "l", a, 1),
            Edge::new("n", "ab", 1, 1),
            Edge::new("n", "a1", 1, 1),
        ],
    )
}

/// Completion of `d` along the arrowhead `a`: turns a diagram with a single
/// non-unit multiplicity into a genuine link diagram.
///
/// For `m > 1` this splices the elementary diagram with leaf weight `m` onto
/// `a`; the partner multiplicity `b` is forced to the weighted linking sum of
/// the remaining arrowheads (which may be 0 when there are none). For `m = 0`
/// the arrowhead becomes a leaf, and for `m = 1` the diagram is unchanged.
pub fn completion(d: &SpliceDiagram, a: &str) -> Result<SpliceDiagram> {
    let v = d
        .vertex(a)
        .ok_or_else(|| Error::Domain(format!("no vertex with id \"{a}\" in diagram")))?;
    if v.kind != VertexKind::Arrowhead {
        return Err(Error::Domain(format!("completion acts on arrowheads; \"{a}\" is not one")));
    }
    for other in d.arrowheads() {
        if other.id != a && other.multiplicity != Some(1) {
            return Err(Error::Domain(format!(
                "completion requires every other arrowhead to have multiplicity 1; \"{}\" has {}",
                other.id,
                other.multiplicity.unwrap_or(0)
            )));
        }
    }
    let m = v.multiplicity.unwrap_or(0);
    match m {
        1 => Ok(d.clone()),
        0 => {
            let vertices = d
                .vertices()
                .iter()
                .map(|v| if v.id == a { Vertex::leaf(&v.id) } else { v.clone() })
                .collect();
            SpliceDiagram::new(vertices, d.edges().to_vec())
        }
        _ => {
            let b = virtual_cut_multiplicity(d, a)?
                .to_u64()
                .ok_or_else(|| Error::Domain("completion partner multiplicity does not fit in 64 bits".into()))?;
            splice(d, a, &elementary(m, b)?, "ab")
        }
    }
}

/// The named diagram families.
#[derive(Clone, Debug)]
pub enum Family {
    /// Torus knot: one node with leaf weights `p`, `q` and one arrowhead.
    Torus { p: u64, q: u64 },
    /// Chain of cabling nodes; entry `j` carries leaf weight `p_j` and
    /// incoming edge weight `q_j`.
    IteratedTorus { pairs: Vec<(u64, u64)> },
    /// Central node with leaf weights `p`, `q` and one unit-weight edge per
    /// entry of `mults` to an outer cabling node with leaf weight `m_j` and
    /// one arrowhead.
    Star { p: u64, q: u64, mults: Vec<u64> },
}

pub fn build_family(family: &Family) -> Result<SpliceDiagram> {
    match family {
        Family::Torus { p, q } => torus(*p, *q),
        Family::IteratedTorus { pairs } => iterated_torus(pairs),
        Family::Star { p, q, mults } => star(*p, *q, mults),
    }
}

pub fn torus(p: u64, q: u64) -> Result<SpliceDiagram> {
    require_coprime(p, q)?;
    SpliceDiagram::new(
        vec![Vertex::node("n"), Vertex::leaf("p"), Vertex::leaf("q"), Vertex::arrowhead("a", 1)],
        vec![Edge::new("n", "p", p, 1), Edge::new("n", "q", q, 1), Edge::new("n", "a", 1, 1)],
    )
}

pub fn iterated_torus(pairs: &[(u64, u64)]) -> Result<SpliceDiagram> {
    if pairs.is_empty() {
        return Err(Error::Domain("iterated torus diagram needs at least one (p, q) pair".into()));
    }
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (j, &(p, q)) in pairs.iter().enumerate() {
        require_coprime(p, q)?;
        vertices.push(Vertex::node(format!("n{j}")));
        vertices.push(Vertex::leaf(format!("p{j}")));
        edges.push(Edge::new(format!("n{j}"), format!("p{j}"), p, 1));
        if j == 0 {
            vertices.push(Vertex::leaf("q0"));
            edges.push(Edge::new("n0", "q0", q, 1));
        } else {
            edges.push(Edge::new(format!("n{}", j - 1), format!("n{j}"), 1, q));
        }
    }
    vertices.push(Vertex::arrowhead("a", 1));
    edges.push(Edge::new(format!("n{}", pairs.len() - 1), "a", 1, 1));
    SpliceDiagram::new(vertices, edges)
}

pub fn star(p: u64, q: u64, mults: &[u64]) -> Result<SpliceDiagram> {
    require_coprime(p, q)?;
    if mults.is_empty() {
        return Err(Error::Domain("star diagram needs at least one outer node".into()));
    }
    if let Some(m) = mults.iter().find(|&&m| m == 0) {
        return Err(Error::Domain(format!("star leaf weights must be positive, got {m}")));
    }
    let mut vertices = vec![Vertex::node("c"), Vertex::leaf("p"), Vertex::leaf("q")];
    let mut edges = vec![Edge::new("c", "p", p, 1), Edge::new("c", "q", q, 1)];
    for (j, &m) in mults.iter().enumerate() {
        vertices.push(Vertex::node(format!("o{j}")));
        vertices.push(Vertex::leaf(format!("m{j}")));
        vertices.push(Vertex::arrowhead(format!("a{j}"), 1));
        edges.push(Edge::new("c", format!("o{j}"), 1, 1));
        edges.push(Edge::new(format!("o{j}"), format!("m{j}"), m, 1));
        edges.push(Edge::new(format!("o{j}"), format!("a{j}"), 1, 1));
    }
    SpliceDiagram::new(vertices, edges)
}

fn require_coprime(p: u64, q: u64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::Domain(format!("weights must be positive, got ({p}, {q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Domain(format!("weights ({p}, {q}) must be coprime")));
    }
    Ok(())
}

// Coprime (leaf weight, incoming edge weight) pairs used by the generator.
const BASE_PAIRS: &[(u64, u64)] =
    &[(2, 3), (2, 5), (3, 4), (3, 5), (2, 7), (4, 5), (3, 7), (2, 9), (5, 6), (4, 7), (5, 7), (3, 8)];
const CABLE_PAIRS: &[(u64, u64)] = &[
    (2, 1), (3, 1), (5, 1), (7, 1), (4, 1), (2, 3), (3, 2), (2, 5), (5, 2), (3, 4),
    (4, 3), (3, 5), (5, 3), (2, 7), (7, 2), (5, 4), (2, 9), (3, 7),
];
const BARE_EDGE_WEIGHTS: &[u64] = &[1, 2, 3, 4, 5, 7, 9];

// Bounds on node multiplicities of generated diagrams; they keep the exact
// step-function enumeration (one candidate jump per i/m) cheap in the
// batch verification suites.
const MAX_NODE_MULT: u64 = 600;
const MAX_TOTAL_MULT: u64 = 1500;

/// Deterministically generates a valid, almost minimal link diagram with at
/// most `size` nodes.
///
/// Growth is by cabling only: start from a torus-link node (two coprime leaf
/// weights >= 2 plus one or two arrowheads), then repeatedly replace an
/// arrowhead by a new node carrying fresh coprime weights, optionally a leaf
/// of weight >= 2, and one or two new multiplicity-1 arrowheads. Cabling
/// keeps the ambient manifold S^3; leaf weights >= 2 rule out bad leaves.
/// Draws whose node multiplicities would be large are redrawn, and
/// single-node outputs with fewer than two weights > 1 and fewer than two
/// arrowheads (possible unknot or Hopf diagrams) are regenerated.
pub fn generate_random(seed: u64, size: u32) -> Result<SpliceDiagram> {
    if size == 0 {
        return Err(Error::Domain("generator size bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut target = rng.gen_range(1..=size);
    for attempt in 0..500 {
        let d = grow(&mut rng, target)?;
        if acceptable(&d)? {
            return Ok(d);
        }
        if attempt % 20 == 19 && target > 1 {
            target -= 1;
        }
    }
    Err(Error::Invariant("generator failed to produce an acceptable diagram".into()))
}

fn grow(rng: &mut ChaCha8Rng, target: u32) -> Result<SpliceDiagram> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut arrows: Vec<String> = Vec::new();
    let (mut nodes, mut leaves, mut heads) = (0u32, 0u32, 0u32);

    let mut new_node = |vertices: &mut Vec<Vertex>| {
        let id = format!("n{nodes}");
        nodes += 1;
        vertices.push(Vertex::node(id.clone()));
        id
    };
    let mut new_leaf = |vertices: &mut Vec<Vertex>| {
        let id = format!("l{leaves}");
        leaves += 1;
        vertices.push(Vertex::leaf(id.clone()));
        id
    };
    let mut new_arrow = |vertices: &mut Vec<Vertex>, arrows: &mut Vec<String>| {
        let id = format!("a{heads}");
        heads += 1;
        vertices.push(Vertex::arrowhead(id.clone(), 1));
        arrows.push(id.clone());
        id
    };

    let (p, q) = BASE_PAIRS[rng.gen_range(0..BASE_PAIRS.len())];
    let root = new_node(&mut vertices);
    let lp = new_leaf(&mut vertices);
    let lq = new_leaf(&mut vertices);
    edges.push(Edge::new(root.clone(), lp, p, 1));
    edges.push(Edge::new(root.clone(), lq, q, 1));
    for _ in 0..rng.gen_range(1..=2u32) {
        let a = new_arrow(&mut vertices, &mut arrows);
        edges.push(Edge::new(root.clone(), a, 1, 1));
    }

    for _ in 1..target {
        let victim = arrows.swap_remove(rng.gen_range(0..arrows.len()));
        let edge_pos = edges
            .iter()
            .position(|e| e.ends.contains(&victim))
            .expect("every arrowhead has an edge");
        let edge = edges.swap_remove(edge_pos);
        let (parent, parent_w) = if edge.ends[0] == victim {
            (edge.ends[1].clone(), edge.weights[1])
        } else {
            (edge.ends[0].clone(), edge.weights[0])
        };
        vertices.retain(|v| v.id != victim);

        let node = new_node(&mut vertices);
        let shape = rng.gen_range(0..3u32);
        let incoming = if shape == 2 {
            BARE_EDGE_WEIGHTS[rng.gen_range(0..BARE_EDGE_WEIGHTS.len())]
        } else {
            let (leaf_w, edge_w) = CABLE_PAIRS[rng.gen_range(0..CABLE_PAIRS.len())];
            let leaf = new_leaf(&mut vertices);
            edges.push(Edge::new(node.clone(), leaf, leaf_w, 1));
            edge_w
        };
        edges.push(Edge::new(parent, node.clone(), parent_w, incoming));
        let extra_arrows = if shape == 1 || shape == 2 { 2 } else { 1 };
        for _ in 0..extra_arrows {
            let a = new_arrow(&mut vertices, &mut arrows);
            edges.push(Edge::new(node.clone(), a, 1, 1));
        }
    }

    SpliceDiagram::new(vertices, edges)
}

fn acceptable(d: &SpliceDiagram) -> Result<bool> {
    let report = d.validate();
    if !report.is_valid() || !report.is_almost_minimal || !report.is_link {
        return Ok(false);
    }
    let mut total = BigInt::zero();
    for node in d.nodes() {
        let m = d.vertex_multiplicity(&node.id)?;
        if m > BigInt::from(MAX_NODE_MULT) {
            return Ok(false);
        }
        total += m;
    }
    if total > BigInt::from(MAX_TOTAL_MULT) {
        return Ok(false);
    }
    if d.nodes().count() == 1 {
        let node = d.nodes().next().unwrap();
        let adj = d.adjacency();
        let idx = d.require_index(&node.id)?;
        let gt1 = adj[idx].iter().filter(|arm| arm.weight_here > 1).count();
        let heads = d.arrowheads().count();
        if gt1 < 2 && heads < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}
