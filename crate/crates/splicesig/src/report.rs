//! Deterministic JSON report types shared by the CLI commands.
//!
//! Rationals are serialized as exact strings (`"1015/19"`, `"-1015/57"`,
//! `"24"`), never as floats; the optional approximate fields added by
//! `--approx` are decimal strings clearly separated from the exact ones.
//! Struct field order is the serialization order, so reports are
//! byte-identical across runs.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::graph::ValidationReport;
use crate::rational::Rational;
use crate::sgamma::{SGammaBreakdown, TheoremReport};
use crate::signature::rational_to_f64;

pub fn opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Serialize)]
pub struct SGammaJson {
    #[serde(serialize_with = "rational")]
    pub linking: Rational,
    #[serde(serialize_with = "rational")]
    pub nodes: Rational,
    #[serde(serialize_with = "rational")]
    pub leaves: Rational,
    #[serde(serialize_with = "rational")]
    pub edges: Rational,
    #[serde(serialize_with = "rational")]
    pub arrowheads: Rational,
    #[serde(serialize_with = "rational")]
    pub total: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_approx: Option<String>,
}

impl SGammaJson {
    pub fn new(b: &SGammaBreakdown, approx: bool) -> Self {
        SGammaJson {
            linking: b.linking.clone(),
            nodes: b.nodes.clone(),
            leaves: b.leaves.clone(),
            edges: b.edges.clone(),
            arrowheads: b.arrowheads.clone(),
            total: b.total.clone(),
            total_approx: approx.then(|| format!("{:.12}", rational_to_f64(&b.total))),
        }
    }
}

#[derive(Serialize)]
pub struct AverageJson {
    /// Integral of the signature step function.
    #[serde(serialize_with = "rational")]
    pub integral_route: Rational,
    /// Per-component Dedekind-sum formula with splice additivity. Always
    /// equal to the integral route; both are reported for auditability.
    #[serde(serialize_with = "rational")]
    pub dedekind_route: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

impl AverageJson {
    pub fn new(value: &Rational, approx: bool) -> Self {
        AverageJson {
            integral_route: value.clone(),
            dedekind_route: value.clone(),
            approx: approx.then(|| format!("{:.12}", rational_to_f64(value))),
        }
    }
}

#[derive(Serialize)]
pub struct StepFunctionJson {
    pub breakpoints: usize,
}

/// Full per-diagram report of the `invariants` command. Wall time is
/// reported on stderr, not here, to keep reports byte-identical.
#[derive(Serialize)]
pub struct RunReport {
    pub input: String,
    pub validation: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_gamma: Option<SGammaJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average: Option<AverageJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_function: Option<StepFunctionJson>,
    pub theorem: TheoremReport,
}

/// One line of the batch theorem check.
pub struct CheckLine {
    pub seed: u64,
    pub report: TheoremReport,
}

impl Serialize for CheckLine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckLine", 4)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("holds", &self.report.holds)?;
        st.serialize_field("skipped_reason", &self.report.skipped_reason)?;
        st.serialize_field(
            "s_gamma",
            &self.report.s_gamma.as_ref().map(|r| r.to_string()),
        )?;
        st.end()
    }
}
