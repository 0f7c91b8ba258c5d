//! Exact scalars, dense univariate polynomials over the rationals, and the
//! linear-algebra kernels (characteristic polynomials, determinants, null
//! spaces, Sturm sequences) the operator algebra is built on.

mod charpoly;
mod matrix;
mod poly;
mod sturm;

pub use charpoly::{char_poly, CharPoly};
pub use matrix::ExactMatrix;
pub use poly::{ParamPoly, Var};
pub use sturm::{
    cauchy_bound, count_all_real, flatten_roots, real_roots, sturm_chain, sturm_count, RealRoot,
    DEFAULT_ROOT_TOL,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Nearest dyadic rational with denominator `2^bits`.
pub fn dyadic_from_f64(v: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let num = (v * scale).round();
    let num = BigInt::from(num as i128);
    Rational::new(num, BigInt::one() << bits as usize)
}

/// Parses `p`, `-p` or `p/q`. Decimal and exponent notation are rejected so
/// that command-line input stays exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q` rendering used in reports (integers print without a denominator).
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 1 / 8 ").unwrap(), rat(1, 8));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = rat(0, -7);
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(dyadic_from_f64(0.75, 4), rat(3, 4));
        assert_eq!(dyadic_from_f64(-1.0 / 3.0, 2), rat(-1, 4));
    }
}
