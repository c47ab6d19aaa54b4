//! Sawtooth and Dedekind-sum arithmetic.
//!
//! Two independent evaluators are provided for the Dedekind sum
//! `s(p,q) = sum_{j=0}^{q-1} ((j/q)) ((pj/q))`: a naive `O(q)` summation and a
//! Euclidean-recursion evaluator with `O(log q)` steps built on the
//! Reciprocity Law. The naive route is kept as the oracle for the fast one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};

/// Sawtooth `((x))`: `{x} - 1/2` off the integers, `0` on them.
///
/// Odd and periodic with period 1; values lie in `(-1/2, 1/2)`.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x.fract_floor_ref() - rat(1, 2)
}

trait FractFloor {
    fn fract_floor_ref(&self) -> Rational;
}

impl FractFloor for Rational {
    /// Fractional part with floor semantics, in `[0, 1)`.
    fn fract_floor_ref(&self) -> Rational {
        self - self.floor()
    }
}

/// Naive `O(q)` evaluation of the Dedekind sum `s(p, q)`.
///
/// The summation runs over an integer kernel: with `0 < j < q` and
/// `r = pj mod q`, the term is `(2j-q)(2r-q)/(4q^2)` (zero when `r = 0`), so
/// the whole sum is a single integer accumulation divided by `4q^2`. The
/// accumulator stays below `q^3`, so plain `i64` suffices up to `q = 2^20`.
pub fn dedekind_sum(p: i64, q: i64) -> Result<Rational> {
    if q <= 0 {
        return Err(Error::Domain(format!("dedekind_sum requires q >= 1, got {q}")));
    }
    if q <= 1 << 20 {
        let p = p.rem_euclid(q);
        let mut acc: i64 = 0;
        let mut r: i64 = 0;
        for j in 1..q {
            r += p;
            if r >= q {
                r -= q;
            }
            if r != 0 {
                acc += (2 * j - q) * (2 * r - q);
            }
        }
        return Ok(rat(acc, 4 * (q as i128) * (q as i128)));
    }
    let q = q as i128;
    let p = (p as i128).rem_euclid(q);
    let mut acc: i128 = 0;
    let mut r: i128 = 0;
    for j in 1..q {
        r += p;
        if r >= q {
            r -= q;
        }
        if r != 0 {
            acc += (2 * j - q) * (2 * r - q);
        }
    }
    Ok(rat(acc, 4 * q * q))
}

/// Reduced fraction over `i128`, used by the fast evaluator so that the
/// Euclidean recursion allocates nothing. With inputs below `2^20` every
/// intermediate product stays far inside `i128` (partial sums have
/// denominators dividing `36 q q'` once reduced).
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    const ZERO: Frac = Frac { num: 0, den: 1 };

    fn reduced(num: i128, den: i128) -> Frac {
        debug_assert!(den > 0);
        if num == 0 {
            return Frac::ZERO;
        }
        let g = num.gcd(&den);
        Frac { num: num / g, den: den / g }
    }

    fn add(self, other: Frac) -> Frac {
        Frac::reduced(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    fn sub(self, other: Frac) -> Frac {
        self.add(Frac { num: -other.num, den: other.den })
    }

    fn to_rational(self) -> Rational {
        rat(self.num, self.den)
    }
}

const FAST_KERNEL_BOUND: i128 = 1 << 20;

/// `O(log q)` kernel over machine integers; requires `0 <= p < q <= 2^20`.
fn fast_kernel(mut p: i128, mut q: i128) -> Frac {
    debug_assert!(0 <= p && p < q && q <= FAST_KERNEL_BOUND);
    if p == 0 {
        return Frac::ZERO;
    }
    let g = p.gcd(&q);
    p /= g;
    q /= g;
    let mut sum = Frac::ZERO;
    let mut negate = false;
    while p != 0 && q != 1 {
        debug_assert_eq!(p.gcd(&q), 1);
        // R(p, q) / 12
        let term = Frac::reduced(p * p + q * q + 1 - 3 * p * q, 12 * p * q);
        sum = if negate { sum.sub(term) } else { sum.add(term) };
        negate = !negate;
        let r = q % p;
        q = p;
        p = r;
    }
    sum
}

/// `R(p, q) = p/q + q/p + gcd(p,q)^2/(pq) - 3`.
///
/// Satisfies `s(p,q) + s(q,p) = R(p,q)/12` for all positive `p, q`
/// (coprimality is not required; the gcd term absorbs common factors).
pub fn reciprocity_defect(p: i64, q: i64) -> Result<Rational> {
    if p <= 0 || q <= 0 {
        return Err(Error::Domain(format!(
            "reciprocity_defect requires positive arguments, got ({p}, {q})"
        )));
    }
    Ok(reciprocity_defect_big(&BigInt::from(p), &BigInt::from(q)))
}

/// `R(p, q)` over big integers; both arguments must be positive.
pub(crate) fn reciprocity_defect_big(p: &BigInt, q: &BigInt) -> Rational {
    debug_assert!(p.is_positive() && q.is_positive());
    let g = p.gcd(q);
    Rational::new(p * p + q * q + &g * &g, p * q) - int(3)
}

/// Reciprocity-accelerated evaluation of `s(p, q)`, `O(log q)` steps.
///
/// Normalizes via periodicity (`s(p+aq,q) = s(p,q)`), cancels the gcd
/// (`s(ap,aq) = s(p,q)`), then alternates the Reciprocity Law with Euclidean
/// reduction until the second argument reaches 1. Intermediate integers never
/// exceed the normalized inputs.
pub fn dedekind_sum_fast(p: i64, q: i64) -> Result<Rational> {
    if q <= 0 {
        return Err(Error::Domain(format!("dedekind_sum_fast requires q >= 1, got {q}")));
    }
    let q = q as i128;
    if q <= FAST_KERNEL_BOUND {
        return Ok(fast_kernel((p as i128).rem_euclid(q), q).to_rational());
    }
    dedekind_sum_fast_big(&BigInt::from(p), &BigInt::from(q))
}

/// Big-integer variant of [`dedekind_sum_fast`]. Inputs whose normalized
/// modulus fits the machine kernel are dispatched to it.
pub fn dedekind_sum_fast_big(p: &BigInt, q: &BigInt) -> Result<Rational> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("dedekind_sum_fast requires q >= 1, got {q}")));
    }
    let mut p = p.mod_floor(q);
    if p.is_zero() {
        return Ok(Rational::zero());
    }
    if let (Some(sp), Some(sq)) = (p.to_i128(), q.to_i128()) {
        if sq <= FAST_KERNEL_BOUND {
            return Ok(fast_kernel(sp, sq).to_rational());
        }
    }
    let g = p.gcd(q);
    let mut q = q / &g;
    p /= g;

    let mut sum = Rational::zero();
    let mut negate = false;
    // s(p,q) = R(p,q)/12 - s(q mod p, p) while 0 < p < q, gcd(p,q) = 1.
    while !p.is_zero() && !q.is_one() {
        let term = reciprocity_defect_big(&p, &q) / int(12);
        if negate {
            sum -= term;
        } else {
            sum += term;
        }
        negate = !negate;
        let r = q.mod_floor(&p);
        q = std::mem::replace(&mut p, r);
    }
    Ok(sum)
}

/// Checks the three-term law for Dedekind sums on one admissible quadruple.
///
/// With `gcd(p,q) = gcd(u,v) = 1`, `p', q'` chosen so that `pp' + qq' = 1` and
/// `t = pv + qu`, verifies exactly that
/// `s(p,q) + s(u,v) = s(p'u - q'v, t) - 1/4 + (q/(vt) + v/(qt) + t/(qv))/12`.
/// The result does not depend on the choice of `(p', q')`: any two solutions
/// differ by a multiple of `(q, -p)`, which shifts `p'u - q'v` by a multiple
/// of `t`.
pub fn three_term_check(p: i64, q: i64, u: i64, v: i64) -> Result<bool> {
    if p <= 0 || q <= 0 || u <= 0 || v <= 0 {
        return Err(Error::Domain(format!(
            "three_term_check requires positive arguments, got ({p}, {q}, {u}, {v})"
        )));
    }
    if p.gcd(&q) != 1 || u.gcd(&v) != 1 {
        return Err(Error::Domain(format!(
            "three_term_check requires gcd(p,q) = gcd(u,v) = 1, got ({p}, {q}, {u}, {v})"
        )));
    }
    let (bp, bq, bu, bv) = (BigInt::from(p), BigInt::from(q), BigInt::from(u), BigInt::from(v));
    let ext = bp.extended_gcd(&bq);
    debug_assert!(ext.gcd.is_one());
    let (pp, qq) = (ext.x, ext.y);
    let t = &bp * &bv + &bq * &bu;

    let lhs = dedekind_sum_fast_big(&bp, &bq)? + dedekind_sum_fast_big(&bu, &bv)?;
    let rhs = dedekind_sum_fast_big(&(&pp * &bu - &qq * &bv), &t)? - rat(1, 4)
        + (Rational::new(bq.clone(), &bv * &t)
            + Rational::new(bv.clone(), &bq * &t)
            + Rational::new(t.clone(), &bq * &bv))
            / int(12);
    Ok(lhs == rhs)
}

/// Outcome of one identity family in the self-test suite.
#[derive(Debug, Clone)]
pub struct SuiteLine {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
}

impl SuiteLine {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs the Dedekind identity suite: fast-vs-naive agreement, the four
/// standard transformation identities, reciprocity, the three-term law and
/// sawtooth oddness/periodicity. Deterministic in `seed`.
pub fn identity_suite(max_q: i64, samples_per_q: u32, seed: u64) -> Result<Vec<SuiteLine>> {
    if max_q < 1 {
        return Err(Error::Domain(format!("identity suite requires max_q >= 1, got {max_q}")));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lines = Vec::new();

    let mut line = SuiteLine { name: "fast evaluator equals naive summation", cases: 0, failures: 0 };
    for q in 1..=max_q {
        for _ in 0..samples_per_q {
            let p = rng.gen_range(-3 * q..=3 * q);
            line.cases += 1;
            if dedekind_sum_fast(p, q)? != dedekind_sum(p, q)? {
                line.failures += 1;
            }
        }
    }
    lines.push(line);

    let mut line = SuiteLine { name: "s(ap,aq) = s(p,q)", cases: 0, failures: 0 };
    let mut line_inv = SuiteLine { name: "s(p',q) = s(p,q) for pp' = 1 mod q", cases: 0, failures: 0 };
    let mut line_odd = SuiteLine { name: "s(-p,q) = -s(p,q)", cases: 0, failures: 0 };
    let mut line_per = SuiteLine { name: "s(p+aq,q) = s(p,q)", cases: 0, failures: 0 };
    for _ in 0..1000 {
        let q = rng.gen_range(1..=max_q);
        let p = rng.gen_range(-3 * q..=3 * q);
        let a = rng.gen_range(1..=8i64);

        line.cases += 1;
        if dedekind_sum_fast(p.saturating_mul(a), q.saturating_mul(a))? != dedekind_sum_fast(p, q)? {
            line.failures += 1;
        }
        line_odd.cases += 1;
        if dedekind_sum_fast(-p, q)? != -dedekind_sum_fast(p, q)? {
            line_odd.failures += 1;
        }
        let shift = rng.gen_range(-5..=5i64);
        line_per.cases += 1;
        if dedekind_sum_fast(p + shift * q, q)? != dedekind_sum_fast(p, q)? {
            line_per.failures += 1;
        }
        if p.gcd(&q) == 1 && q > 1 {
            let ext = BigInt::from(p).extended_gcd(&BigInt::from(q));
            let p_inv = ext.x.mod_floor(&BigInt::from(q));
            line_inv.cases += 1;
            if dedekind_sum_fast_big(&p_inv, &BigInt::from(q))? != dedekind_sum_fast(p, q)? {
                line_inv.failures += 1;
            }
        }
    }
    lines.push(line);
    lines.push(line_inv);
    lines.push(line_odd);
    lines.push(line_per);

    let mut line = SuiteLine { name: "12(s(p,q)+s(q,p)) = R(p,q)", cases: 0, failures: 0 };
    for q in 1..=max_q.min(500) {
        for p in 1..q {
            line.cases += 1;
            let lhs = (dedekind_sum_fast(p, q)? + dedekind_sum_fast(q, p)?) * int(12);
            if lhs != reciprocity_defect(p, q)? {
                line.failures += 1;
            }
        }
    }
    lines.push(line);

    let mut line = SuiteLine { name: "three-term law", cases: 0, failures: 0 };
    for _ in 0..1000 {
        let (p, q) = random_coprime_pair(&mut rng, 60);
        let (u, v) = random_coprime_pair(&mut rng, 60);
        line.cases += 1;
        if !three_term_check(p, q, u, v)? {
            line.failures += 1;
        }
    }
    lines.push(line);

    let mut line = SuiteLine { name: "sawtooth oddness and periodicity", cases: 0, failures: 0 };
    for _ in 0..1000 {
        let n = rng.gen_range(-1000..=1000i64);
        let d = rng.gen_range(1..=1000i64);
        let x = rat(n, d);
        let shift = rng.gen_range(-10..=10i64);
        line.cases += 1;
        if sawtooth(&-x.clone()) != -sawtooth(&x) || sawtooth(&(x.clone() + int(shift))) != sawtooth(&x) {
            line.failures += 1;
        }
    }
    lines.push(line);

    Ok(lines)
}

pub(crate) fn random_coprime_pair(rng: &mut StdRng, bound: i64) -> (i64, i64) {
    loop {
        let p = rng.gen_range(1..=bound);
        let q = rng.gen_range(1..=bound);
        if p.gcd(&q) == 1 {
            return (p, q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sawtooth_definition() {
        assert_eq!(sawtooth(&rat(1, 4)), rat(-1, 4));
        assert_eq!(sawtooth(&int(7)), int(0));
        assert_eq!(sawtooth(&rat(-1, 3)), rat(1, 6));
    }

    #[test]
    fn naive_small_values() {
        // s(1,3) = ((1/3))^2 + ((2/3))^2 = 2 * (1/6)^2
        assert_eq!(dedekind_sum(1, 3).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum(5, 1).unwrap(), int(0));
        assert!(dedekind_sum(1, 0).is_err());
        assert!(dedekind_sum(1, -4).is_err());
    }

    #[test]
    fn paper_aggregates() {
        let left = dedekind_sum(-19, 38).unwrap()
            + dedekind_sum(-20, 38).unwrap()
            + dedekind_sum(1, 38).unwrap();
        assert_eq!(left, rat(45, 19));
        let right = dedekind_sum(1, 18).unwrap()
            + dedekind_sum(-9, 18).unwrap()
            + dedekind_sum(2, 18).unwrap()
            + dedekind_sum(-12, 18).unwrap();
        assert_eq!(right, rat(11, 6));
    }

    #[test]
    fn fast_matches_naive() {
        assert_eq!(dedekind_sum_fast(1, 3).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum_fast(0, 17).unwrap(), int(0));
        assert_eq!(dedekind_sum_fast(5, 7).unwrap(), dedekind_sum(5, 7).unwrap());
        for q in 1..=80 {
            for p in -2 * q..=2 * q {
                assert_eq!(dedekind_sum_fast(p, q).unwrap(), dedekind_sum(p, q).unwrap(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn defect_values() {
        assert_eq!(reciprocity_defect(1, 1).unwrap(), int(0));
        assert_eq!(reciprocity_defect(2, 3).unwrap(), rat(-2, 3));
        assert_eq!(reciprocity_defect(2, 4).unwrap(), int(0));
        assert!(reciprocity_defect(0, 3).is_err());
        assert!(reciprocity_defect(3, -1).is_err());
    }

    #[test]
    fn three_term_instances() {
        assert!(three_term_check(1, 1, 1, 1).unwrap());
        assert!(three_term_check(2, 3, 1, 2).unwrap());
        assert!(three_term_check(5, 7, 3, 4).unwrap());
        assert!(three_term_check(2, 4, 1, 2).is_err());
        assert!(three_term_check(0, 1, 1, 1).is_err());
    }

    #[test]
    fn suite_passes_on_small_bound() {
        let lines = identity_suite(120, 6, 1).unwrap();
        for line in &lines {
            assert!(line.passed(), "{} failed {}/{}", line.name, line.failures, line.cases);
        }
    }

    proptest! {
        #[test]
        fn prop_sawtooth_odd_periodic(n in -400i64..400, d in 1i64..400, k in -4i64..4) {
            let x = rat(n, d);
            prop_assert_eq!(sawtooth(&-x.clone()), -sawtooth(&x));
            prop_assert_eq!(sawtooth(&(x.clone() + int(k))), sawtooth(&x));
            if !x.is_integer() {
                prop_assert!(sawtooth(&x) > rat(-1, 2) && sawtooth(&x) < rat(1, 2));
            }
        }

        #[test]
        fn prop_fast_equals_naive(p in -5000i64..5000, q in 1i64..600) {
            prop_assert_eq!(dedekind_sum_fast(p, q).unwrap(), dedekind_sum(p, q).unwrap());
        }

        #[test]
        fn prop_reciprocity(p in 1i64..300, q in 1i64..300) {
            let lhs = (dedekind_sum_fast(p, q).unwrap() + dedekind_sum_fast(q, p).unwrap()) * int(12);
            prop_assert_eq!(lhs, reciprocity_defect(p, q).unwrap());
        }
    }
}
