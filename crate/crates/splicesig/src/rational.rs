//! Exact rational arithmetic.
//!
//! All invariants computed by this crate are exact rationals: numerators are
//! arbitrary-precision integers and every value is kept in lowest terms with
//! a positive denominator (guaranteed by `Ratio`'s constructors). No floating
//! point enters any computation path; `f64` appears only in the optional
//! non-authoritative `--approx` CLI output.

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> Rational {
    Rational::new(n.into(), d.into())
}

/// An integer as an exact rational.
pub fn int<N: Into<BigInt>>(n: N) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert!(rat(3, -6).denom() > &BigInt::from(0));
        assert_eq!(rat(-1015, 57).to_string(), "-1015/57");
        assert_eq!(int(24).to_string(), "24");
    }
}
