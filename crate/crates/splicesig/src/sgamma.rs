//! The combinatorial invariant S(Gamma) and the main theorem check
//! `average signature = -S(Gamma)/3`.
//!
//! S(Gamma) is a sum of five terms: twice the total (multiplicity-weighted)
//! linking number, a node term `d_v (valency - 2)`, a leaf term `-d_v`, an
//! edge term per node-node edge built from the induced cut multiplicities,
//! and an arrowhead term `d / m` from each arrowhead's nearest weight and
//! nearest node multiplicity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SpliceDiagram, VertexKind};
use crate::ops::cut_edge;
use crate::rational::{int, rat, Rational};
use crate::signature::average_signature;

/// The five terms of S(Gamma) and their total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGammaBreakdown {
    pub linking: Rational,
    pub nodes: Rational,
    pub leaves: Rational,
    pub edges: Rational,
    pub arrowheads: Rational,
    pub total: Rational,
}

/// Computes S(Gamma) for a structurally valid diagram with at least one node.
///
/// The linking term is multiplicity-weighted (`m_a m_a' lk(a, a')` over
/// ordered pairs), which reduces to the plain double sum for genuine links.
/// Edge terms follow the three-case formula with `c = gcd(mu_v, mu_w)` when
/// both induced cut multiplicities are non-zero, and the boundary form
/// `1/d_v - d_w/d_we^2` when one of them vanishes.
pub fn s_gamma(d: &SpliceDiagram) -> Result<SGammaBreakdown> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(Error::Domain(format!(
            "S(Gamma) requires a structurally valid diagram: {}",
            report.structural_errors.join("; ")
        )));
    }
    if d.nodes().next().is_none() {
        return Err(Error::Domain("S(Gamma) requires at least one node".into()));
    }
    let adj = d.adjacency();

    let mut linking = Rational::zero();
    let heads: Vec<(usize, u64)> = d
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VertexKind::Arrowhead)
        .map(|(i, v)| (i, v.multiplicity.unwrap_or(0)))
        .collect();
    for (x, &(ai, am)) in heads.iter().enumerate() {
        for &(bi, bm) in &heads[x + 1..] {
            if am == 0 || bm == 0 {
                continue;
            }
            let lk = d.linking_number_idx(&adj, ai, bi)?;
            // ordered pairs: each unordered pair counts twice
            linking += int(2) * int(lk * am * bm);
        }
    }

    let mut nodes = Rational::zero();
    let mut leaves = Rational::zero();
    for (i, v) in d.vertices().iter().enumerate() {
        match v.kind {
            VertexKind::Node => {
                let valency = adj[i].len() as i64;
                nodes += d.vertex_weight_idx(&adj, i)? * int(valency - 2);
            }
            VertexKind::Leaf => leaves -= d.vertex_weight_idx(&adj, i)?,
            VertexKind::Arrowhead => {}
        }
    }

    let mut edges = Rational::zero();
    for e in d.node_node_edges() {
        let edge = &d.edges()[e];
        let cut = cut_edge(d, (&edge.ends[0], &edge.ends[1]))?;
        let (w_a, w_b) = (edge.weights[0], edge.weights[1]);
        if cut.mult_a != 0 && cut.mult_b != 0 {
            let m_a = d.vertex_multiplicity(&edge.ends[0])?;
            let m_b = d.vertex_multiplicity(&edge.ends[1])?;
            let c = cut.mult_a.gcd(&cut.mult_b);
            let c2 = int(BigInt::from(c) * c);
            edges += c2
                * (Rational::new(w_a.into(), BigInt::from(cut.mult_a) * m_a)
                    + Rational::new(w_b.into(), BigInt::from(cut.mult_b) * m_b)
                    - rat(1u64, BigInt::from(cut.mult_a) * cut.mult_b));
        } else {
            // one side carries no link components; orient so that the zero
            // multiplicity sits at the "w" end of the boundary formula
            let (v_end, w_end, w_we) = if cut.mult_b == 0 {
                (&edge.ends[0], &edge.ends[1], w_b)
            } else {
                (&edge.ends[1], &edge.ends[0], w_a)
            };
            let d_v = d.vertex_weight(v_end)?;
            let d_w = d.vertex_weight(w_end)?;
            edges += d_v.recip() - d_w / int(BigInt::from(w_we) * w_we);
        }
    }

    let mut arrowheads = Rational::zero();
    for (ai, _) in &heads {
        let (node, weight) = {
            let (ni, w) = d.nearest_idx(&adj, *ai)?;
            (d.vertices()[ni].id.clone(), w)
        };
        let m = d.vertex_multiplicity(&node)?;
        if m.is_zero() {
            return Err(Error::Domain(format!(
                "arrowhead term is undefined: node \"{node}\" has multiplicity 0"
            )));
        }
        arrowheads += Rational::new(weight.into(), m);
    }

    let total = &linking + &nodes + &leaves + &edges + &arrowheads;
    Ok(SGammaBreakdown { linking, nodes, leaves, edges, arrowheads, total })
}

/// Verdict of the main theorem on one diagram.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    /// S(Gamma), when computable.
    #[serde(serialize_with = "super::report::opt_rational")]
    pub s_gamma: Option<Rational>,
    /// Average signature, when computable.
    #[serde(serialize_with = "super::report::opt_rational")]
    pub average: Option<Rational>,
    /// Exact equality `average = -S(Gamma)/3`. Meaningful only when
    /// `skipped_reason` is `None`; a skipped diagram reports `false`.
    pub holds: bool,
    /// Why the theorem was not asserted: structural invalidity, bad leaves,
    /// multilink input, or the conservative unknot/Hopf shape rule.
    pub skipped_reason: Option<String>,
}

impl TheoremReport {
    pub fn skipped(&self) -> bool {
        self.skipped_reason.is_some()
    }
}

/// Checks `average = -S(Gamma)/3`.
///
/// The check is skipped (never silently passed) unless the diagram is valid,
/// almost minimal, a genuine link, and not of the conservative exceptional
/// shape covering the unknot and the Hopf link: a single node with all unit
/// weights, or with fewer than two weights greater than 1 and at most two
/// arrowheads. Both sides are still reported when they are computable.
pub fn check_main_theorem(d: &SpliceDiagram) -> Result<TheoremReport> {
    let report = d.validate();
    if !report.is_valid() {
        return Ok(TheoremReport {
            s_gamma: None,
            average: None,
            holds: false,
            skipped_reason: Some(format!(
                "structurally invalid diagram: {}",
                report.structural_errors.join("; ")
            )),
        });
    }

    let s = s_gamma(d).ok().map(|b| b.total);
    let average = if report.arrowhead_count_nonzero > 0 { average_signature(d).ok() } else { None };

    let skipped_reason = if !report.is_almost_minimal {
        Some(format!("not almost minimal (bad leaves: {})", report.bad_leaves.join(", ")))
    } else if !report.is_link {
        Some("multilink: arrowhead multiplicities differ from 1".to_string())
    } else if exceptional_shape(d) {
        Some("exceptional shape: possible unknot or Hopf link".to_string())
    } else {
        None
    };

    let holds = match (&skipped_reason, &s, &average) {
        (None, Some(s), Some(avg)) => *avg == -s / int(3),
        _ => false,
    };
    if skipped_reason.is_none() && (s.is_none() || average.is_none()) {
        return Err(Error::Invariant(
            "theorem check on an eligible diagram failed to compute both sides".into(),
        ));
    }

    Ok(TheoremReport { s_gamma: s, average, holds, skipped_reason })
}

/// The conservative unknot/Hopf skip rule: a single node whose adjacent
/// weights are all 1, or with fewer than two weights greater than 1 and at
/// most two arrowheads.
fn exceptional_shape(d: &SpliceDiagram) -> bool {
    let mut nodes = d.nodes();
    let node = match (nodes.next(), nodes.next()) {
        (Some(n), None) => n,
        _ => return false,
    };
    let adj = d.adjacency();
    let idx = d.index_of(&node.id).expect("node exists");
    let gt1 = adj[idx].iter().filter(|arm| arm.weight_here > 1).count();
    let heads = d.arrowheads().count();
    gt1 == 0 || (gt1 == 1 && heads <= 2)
}
