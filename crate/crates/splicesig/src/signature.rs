//! Tristram-Levine signatures of graph links.
//!
//! Every splice component with node multiplicity `m` contributes equivariant
//! signatures supported at the rational points `i/m`; the component data
//! `(alpha_j, m_j, beta_j, m, s_j)` turns them into exact sawtooth sums. The
//! full signature step function assembles the jumps of all components, and
//! the average signature is computed by two independent routes that are
//! asserted equal: the exact integral of the step function, and the
//! per-component Dedekind-sum formula combined with splice additivity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::dedekind::{dedekind_sum_fast_big, reciprocity_defect_big};
use crate::error::{Error, Result};
use crate::graph::{SpliceDiagram, VertexKind};
use crate::ops::{components_with_eta, star};
use crate::rational::{int, rat, Rational};

/// Neumann data of a single splice component: near-node weights `alphas`,
/// arrowhead multiplicities `mults` (0 in leaf directions), the inverses
/// `betas` with `beta_j * prod(alpha_i, i != j) = 1 mod alpha_j`, the node
/// multiplicity `m` and the integers `s_j = (m_j - beta_j m) / alpha_j`.
#[derive(Clone, Debug)]
pub struct ComponentData {
    pub alphas: Vec<u64>,
    pub mults: Vec<BigInt>,
    pub betas: Vec<BigInt>,
    pub m: BigInt,
    pub s: Vec<BigInt>,
}

/// Extracts the Neumann data of a one-node diagram.
pub fn component_data(c: &SpliceDiagram) -> Result<ComponentData> {
    let mut nodes = c.nodes();
    let node = nodes
        .next()
        .ok_or_else(|| Error::Domain("component data requires a diagram with a node".into()))?;
    if nodes.next().is_some() {
        return Err(Error::Domain(
            "component data is defined for splice components with exactly one node".into(),
        ));
    }
    let node_idx = c.require_index(&node.id)?;
    let adj = c.adjacency();

    let mut alphas = Vec::new();
    let mut mults = Vec::new();
    for arm in &adj[node_idx] {
        let other = &c.vertices()[arm.other];
        let m = match other.kind {
            VertexKind::Leaf => BigInt::zero(),
            VertexKind::Arrowhead => BigInt::from(other.multiplicity.unwrap_or(0)),
            VertexKind::Node => {
                return Err(Error::Domain(
                    "component data is defined for splice components with exactly one node".into(),
                ))
            }
        };
        alphas.push(arm.weight_here);
        mults.push(m);
    }

    let n = alphas.len();
    let co_products: Vec<BigInt> = (0..n)
        .map(|j| {
            let mut p = BigInt::one();
            for (i, &a) in alphas.iter().enumerate() {
                if i != j {
                    p *= a;
                }
            }
            p
        })
        .collect();

    let m: BigInt = co_products.iter().zip(&mults).map(|(a, mj)| a * mj).sum();
    if m != c.vertex_multiplicity(&node.id)? {
        return Err(Error::Invariant(format!(
            "component multiplicity mismatch at node \"{}\"",
            node.id
        )));
    }

    let mut betas = Vec::new();
    let mut s = Vec::new();
    for j in 0..n {
        let alpha = BigInt::from(alphas[j]);
        let beta = if alphas[j] == 1 {
            BigInt::zero()
        } else {
            let ext = co_products[j].mod_floor(&alpha).extended_gcd(&alpha);
            if !ext.gcd.is_one() {
                return Err(Error::Domain(format!(
                    "weights adjacent to node \"{}\" are not pairwise coprime",
                    node.id
                )));
            }
            ext.x.mod_floor(&alpha)
        };
        let (quot, rem) = (&mults[j] - &beta * &m).div_rem(&alpha);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!(
                "s_j is not integral for arm {j} at node \"{}\"",
                node.id
            )));
        }
        betas.push(beta);
        s.push(quot);
    }

    Ok(ComponentData { alphas, mults, betas, m, s })
}

/// Per-component state for fast sawtooth sums at rational points `p/q` with
/// `q | m`: the node multiplicity as `u64` and each `s_j mod m`.
struct ComponentKernel {
    m: u64,
    s_mod_m: Vec<u64>,
}

impl ComponentKernel {
    fn new(data: &ComponentData) -> Result<Self> {
        let m = data.m.to_u64().ok_or_else(|| {
            Error::Domain(format!("component multiplicity {} too large to enumerate", data.m))
        })?;
        let s_mod_m = if m == 0 {
            vec![0; data.s.len()]
        } else {
            let big_m = BigInt::from(m);
            data.s.iter().map(|s| s.mod_floor(&big_m).to_u64().unwrap()).collect()
        };
        Ok(ComponentKernel { m, s_mod_m })
    }

    /// Twice the sawtooth sum at `p/q` in lowest terms, as a numerator over
    /// `q`: `sum_j (2 r_j - q)` over the arms with `r_j = s_j p mod q != 0`.
    /// Only called when `q` divides `m`.
    fn jump_numerator(&self, p: u64, q: u64) -> i64 {
        debug_assert!(q > 0 && self.m % q == 0);
        let mut num: i64 = 0;
        for &s in &self.s_mod_m {
            let r = ((s as u128 % q as u128) * p as u128 % q as u128) as u64;
            if r != 0 {
                num += 2 * r as i64 - q as i64;
            }
        }
        num
    }
}

/// A reduced fraction in `(0, 1)` ordered by value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct JumpPoint {
    num: u64,
    den: u64,
}

impl Ord for JumpPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for JumpPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn kernels(d: &SpliceDiagram) -> Result<(Vec<ComponentKernel>, u64, i64)> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(Error::Domain(format!(
            "signature computation requires a structurally valid diagram: {}",
            report.structural_errors.join("; ")
        )));
    }
    if report.arrowhead_count_nonzero == 0 {
        return Err(Error::Domain(
            "signature computation requires at least one arrowhead with non-zero multiplicity"
                .into(),
        ));
    }
    let (comps, eta) = components_with_eta(d)?;
    let mut kernels = Vec::with_capacity(comps.len());
    for c in &comps {
        kernels.push(ComponentKernel::new(&component_data(c)?)?);
    }
    Ok((kernels, eta, report.arrowhead_count_nonzero as i64))
}

/// Equivariant signature of the link at `exp(2 pi i p/q)` for coprime
/// `0 < p < q`: the sum over splice components whose multiplicity `q`
/// divides of twice the sawtooth sum of `s_j p / q`. Always an integer;
/// antisymmetric in `p -> q - p`.
pub fn equivariant_signature(d: &SpliceDiagram, p: u64, q: u64) -> Result<i64> {
    if q == 0 || p == 0 || p >= q {
        return Err(Error::Domain(format!(
            "equivariant signature requires 0 < p < q, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Domain(format!(
            "equivariant signature requires coprime (p, q), got ({p}, {q})"
        )));
    }
    let (kernels, _, _) = kernels(d)?;
    let mut total: i64 = 0;
    for k in &kernels {
        if k.m % q == 0 {
            total += k.jump_numerator(p, q);
        }
    }
    if total.rem_euclid(q as i64) != 0 {
        return Err(Error::Invariant(format!(
            "equivariant signature at {p}/{q} is not an integer"
        )));
    }
    Ok(total / q as i64)
}

/// The Tristram-Levine signature as a piecewise-constant function on the
/// open interval `(0, 1)` in the variable `x` of `sigma(exp(2 pi i x))`.
///
/// Breakpoints are the genuine jump locations (candidates `i/m` whose summed
/// equivariant signature vanishes are dropped); `values[k]` is the constant
/// value between breakpoints `k-1` and `k`. At a breakpoint itself the
/// function is evaluated as the mean of the one-sided limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    breakpoints: Vec<Rational>,
    values: Vec<i64>,
}

impl StepFunction {
    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Exact value at `x` in `(0, 1)`; the mean of the one-sided limits when
    /// `x` is a breakpoint.
    pub fn value_at(&self, x: &Rational) -> Result<Rational> {
        if *x <= Rational::zero() || *x >= Rational::one() {
            return Err(Error::Domain(format!("step function is defined on (0, 1), got {x}")));
        }
        match self.breakpoints.binary_search_by(|b| b.cmp(x)) {
            Ok(i) => Ok(rat(self.values[i] + self.values[i + 1], 2)),
            Err(i) => Ok(int(self.values[i])),
        }
    }

    /// Exact integral over `(0, 1)`.
    pub fn integral(&self) -> Rational {
        let mut total = Rational::zero();
        let mut prev = Rational::zero();
        for (i, value) in self.values.iter().enumerate() {
            let next = self.breakpoints.get(i).cloned().unwrap_or_else(|| int(1));
            total += int(*value) * (&next - &prev);
            prev = next;
        }
        total
    }

    /// CSV rows `x_start,x_end,value`, one per open interval, with exact
    /// rational endpoints. With `approx` an extra pair of decimal columns is
    /// appended for plotting; those are not authoritative.
    pub fn to_csv(&self, approx: bool) -> String {
        let mut out = String::new();
        if approx {
            out.push_str("x_start,x_end,value,x_start_dec,x_end_dec\n");
        } else {
            out.push_str("x_start,x_end,value\n");
        }
        let mut prev = Rational::zero();
        for (i, value) in self.values.iter().enumerate() {
            let next = self.breakpoints.get(i).cloned().unwrap_or_else(|| int(1));
            if approx {
                out.push_str(&format!(
                    "{prev},{next},{value},{:.12},{:.12}\n",
                    rational_to_f64(&prev),
                    rational_to_f64(&next)
                ));
            } else {
                out.push_str(&format!("{prev},{next},{value}\n"));
            }
            prev = next;
        }
        out
    }
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Computes the signature step function of the (multi)link of `d`.
///
/// Candidate jump points are the `i/m` over all splice components; the value
/// left of every jump and right of every jump differ by twice the summed
/// equivariant signature there, and near 0 the value is `1 - #Gamma` minus
/// the sum of all jumps above, where `#Gamma` counts arrowheads of non-zero
/// multiplicity.
pub fn signature_function(d: &SpliceDiagram) -> Result<StepFunction> {
    let (kernels, _, nonzero_heads) = kernels(d)?;

    // numerators of twice the sawtooth sums, keyed by reduced jump location
    let mut jumps: BTreeMap<JumpPoint, i64> = BTreeMap::new();
    for k in &kernels {
        for i in 1..k.m {
            let g = i.gcd(&k.m);
            let (p, q) = (i / g, k.m / g);
            let r_full = k.jump_numerator_scaled(i, g, q);
            if r_full != 0 {
                *jumps.entry(JumpPoint { num: p, den: q }).or_insert(0) += r_full;
            }
        }
    }

    let mut breakpoints = Vec::new();
    let mut sigma_minus = Vec::new();
    let mut total_jump: i64 = 0;
    for (point, num) in &jumps {
        if *num == 0 {
            continue;
        }
        let q = point.den as i64;
        if num.rem_euclid(q) != 0 {
            return Err(Error::Invariant(format!(
                "equivariant signature at {}/{} is not an integer",
                point.num, point.den
            )));
        }
        let s = num / q;
        breakpoints.push(rat(point.num, point.den));
        sigma_minus.push(s);
        total_jump += s;
    }

    let mut values = Vec::with_capacity(sigma_minus.len() + 1);
    let mut current = 1 - nonzero_heads - total_jump;
    values.push(current);
    for s in &sigma_minus {
        current += 2 * s;
        values.push(current);
    }
    Ok(StepFunction { breakpoints, values })
}

impl ComponentKernel {
    /// `jump_numerator(i/g, m/g)` computed from the `mod m` residues: with
    /// `g = gcd(i, m)` and `q = m/g`, each residue `s_j (i/g) mod q` equals
    /// `(s_j i mod m) / g`.
    fn jump_numerator_scaled(&self, i: u64, g: u64, q: u64) -> i64 {
        let mut num: i64 = 0;
        for &s in &self.s_mod_m {
            let r = (s as u128 * i as u128 % self.m as u128) as u64 / g;
            if r != 0 {
                num += 2 * r as i64 - q as i64;
            }
        }
        num
    }
}

/// Average Tristram-Levine signature, computed by two independent routes
/// that must agree exactly: the integral of [`signature_function`] and the
/// sum over splice components of `1 - #comp - 4 sum_j s(s_j, m)` plus the
/// eta correction for every cut edge with two non-zero induced
/// multiplicities.
pub fn average_signature(d: &SpliceDiagram) -> Result<Rational> {
    let step = signature_function(d)?;
    let route_a = step.integral();

    let (comps, eta) = components_with_eta(d)?;
    let mut route_b = int(eta);
    for c in &comps {
        let data = component_data(c)?;
        let heads = c.arrowheads().filter(|a| a.multiplicity.unwrap_or(0) != 0).count() as i64;
        let mut dedekind = Rational::zero();
        for s in &data.s {
            dedekind += dedekind_sum_fast_big(s, &data.m)?;
        }
        route_b += int(1 - heads) - int(4) * dedekind;
    }

    if route_a != route_b {
        return Err(Error::Invariant(format!(
            "average signature routes disagree: integral gives {route_a}, Dedekind sums give {route_b}"
        )));
    }
    Ok(route_a)
}

/// Closed form for the average signature of the elementary diagram with
/// leaf weight `a` and arrowhead multiplicities `b`, 1:
/// `-1 - (R(1,a(b+1)) + R(b,(b+1)a) - R(1,a) - 12 s(a,b)) / 3`.
/// Requires `a, b >= 1`; the formula degenerates at `b = 0` (use
/// [`average_signature`] on the diagram directly there).
pub fn average_elementary(a: u64, b: u64) -> Result<Rational> {
    if a < 1 || b < 1 {
        return Err(Error::Domain(format!(
            "average_elementary requires a, b >= 1, got ({a}, {b})"
        )));
    }
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let ab1 = &a * (&b + 1);
    let value = reciprocity_defect_big(&BigInt::one(), &ab1) + reciprocity_defect_big(&b, &ab1)
        - reciprocity_defect_big(&BigInt::one(), &a)
        - int(12) * dedekind_sum_fast_big(&a, &b)?;
    Ok(int(-1) - value / int(3))
}

/// Dedekind-sum-free closed form for the average signature of the star
/// family: central node with leaf weights `p`, `q` and outer cabling nodes
/// with leaf weights `mults`. Independent oracle for the full pipeline on
/// [`star`] diagrams.
///
/// With `M = pq sum(m_j)` and `M_j = M - pq m_j`, the value is
/// `1 - k + R(p,q)/3 - sum_j T_j / 3` where
/// `T_j = R(1, m_j(M_j+1)) + R(M_j, (M_j+1)m_j) + R(m_j, M) - R(m_j, M_j) - R(1, m_j)`.
/// When `k = 1` the term `M_j` vanishes and the two singular defects cancel
/// in the limit, leaving `T_j = R(m_j, M)`.
pub fn family2_average_oracle(p: u64, q: u64, mults: &[u64]) -> Result<Rational> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(Error::Domain(format!("oracle requires coprime positive (p, q), got ({p}, {q})")));
    }
    if mults.is_empty() || mults.contains(&0) {
        return Err(Error::Domain("oracle requires a non-empty list of positive multiplicities".into()));
    }
    let one = BigInt::one();
    let k = mults.len() as i64;
    let pq = BigInt::from(p) * BigInt::from(q);
    let total: BigInt = mults.iter().map(|&m| BigInt::from(m)).sum();
    let big_m = &pq * &total;

    let mut sum = Rational::zero();
    for &mj in mults {
        let mj = BigInt::from(mj);
        let mj_cap = &big_m - &pq * &mj;
        let term = if mj_cap.is_zero() {
            reciprocity_defect_big(&mj, &big_m)
        } else {
            let mj_cap1 = &mj_cap + 1;
            reciprocity_defect_big(&one, &(&mj * &mj_cap1))
                + reciprocity_defect_big(&mj_cap, &(&mj_cap1 * &mj))
                + reciprocity_defect_big(&mj, &big_m)
                - reciprocity_defect_big(&mj, &mj_cap)
                - reciprocity_defect_big(&one, &mj)
        };
        sum += term;
    }
    Ok(int(1 - k) + (reciprocity_defect_big(&BigInt::from(p), &BigInt::from(q)) - sum) / int(3))
}

/// Convenience cross-check used in tests and examples: evaluates both the
/// oracle and the pipeline on the same star diagram.
pub fn star_pipeline_average(p: u64, q: u64, mults: &[u64]) -> Result<Rational> {
    average_signature(&star(p, q, mults)?)
}
