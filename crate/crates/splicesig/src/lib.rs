//! Exact invariants of graph links in the three-sphere given by splice
//! diagrams.
//!
//! A splice diagram is a weighted tree encoding a link in S^3 (nodes are
//! Seifert-fibered pieces, arrowheads are link components). This crate
//! computes, entirely in exact rational arithmetic:
//!
//! - the Tristram-Levine signature of the link as a step function on the
//!   unit circle, from Neumann's per-component equivariant signature
//!   formula ([`signature::signature_function`]);
//! - its average over the circle, by two independent routes that are
//!   asserted equal ([`signature::average_signature`]);
//! - the combinatorial invariant S(Gamma) ([`sgamma::s_gamma`]) and the
//!   identity `average = -S(Gamma)/3` for almost minimal link diagrams
//!   ([`sgamma::check_main_theorem`]);
//! - Dedekind sums with a naive and a reciprocity-accelerated evaluator
//!   plus an identity self-test suite ([`dedekind`]).
//!
//! Diagram surgery (cutting, splicing, splice components, completions) lives
//! in [`ops`], together with constructors for torus knots, iterated torus
//! knots, the star family and a seeded random generator of link diagrams.
//!
//! Start with the runnable examples: `cargo run --example en_link` walks
//! through the full pipeline on a two-node diagram, `trefoil_signature`
//! exports a step function, `random_theorem_check` verifies the main
//! identity on a generated corpus. The `splicesig` binary exposes the same
//! functionality on diagram JSON files.

pub mod cli;
pub mod dedekind;
mod error;
pub mod graph;
pub mod ops;
pub mod rational;
pub mod report;
pub mod sgamma;
pub mod signature;

pub use error::{Error, Result};
pub use graph::{Edge, SpliceDiagram, ValidationReport, Vertex, VertexKind};
pub use rational::Rational;
