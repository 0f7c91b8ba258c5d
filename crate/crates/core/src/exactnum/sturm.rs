use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{dyadic_from_f64, int, to_f64, ParamPoly, Rational};
use crate::error::{Error, Result};

/// Default bisection width for [`real_roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Sturm sequence `p, p', -rem(p, p'), ...` of the square-free part of `p`.
pub fn sturm_chain(p: &ParamPoly) -> Result<Vec<ParamPoly>> {
    let p = p.square_free_part()?;
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1])?;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    Ok(chain)
}

fn variations(chain: &[ParamPoly], at: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at(at);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sign variations of the chain at +infinity or -infinity.
fn variations_at_infinity(chain: &[ParamPoly], positive: bool) -> usize {
    let signs = chain.iter().filter_map(|p| {
        let d = p.degree()?;
        let s = if p.leading().is_positive() { 1i8 } else { -1 };
        Some(if positive || d % 2 == 0 { s } else { -s })
    });
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &ParamPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::InvalidInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let chain = sturm_chain(p)?;
    Ok(variations(&chain, lo) - variations(&chain, hi))
}

/// Number of distinct real roots of `p` on the whole line.
pub fn count_all_real(p: &ParamPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let chain = sturm_chain(p)?;
    Ok(variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true))
}

/// Cauchy bound `1 + max |a_i / a_n|`: every root has modulus below it.
pub fn cauchy_bound(p: &ParamPoly) -> Result<Rational> {
    let lc = p.leading();
    if lc.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = lc.abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(max + Rational::one())
}

/// One real root with its multiplicity and an isolating interval
/// `(lo, hi]` of width at most the requested tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub lo: Rational,
    #[serde(skip)]
    pub hi: Rational,
    /// Set when the root was confirmed to be rational.
    #[serde(skip)]
    pub exact: Option<Rational>,
}

/// All real roots of `p`, ascending, each to within `tol` (isolating
/// interval width). Multiplicities come from the square-free decomposition.
pub fn real_roots(p: &ParamPoly, tol: f64) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("root tolerance must be positive, got {tol}")));
    }
    let tol = dyadic_from_f64(tol, 60).max(Rational::new(BigInt::one(), BigInt::one() << 60usize));
    let mut roots = Vec::new();
    for (factor, mult) in p.square_free_decomposition()? {
        let chain = sturm_chain(&factor)?;
        let b = cauchy_bound(&factor)?;
        let lo = -b.clone();
        let v_lo = variations(&chain, &lo);
        let v_hi = variations(&chain, &b);
        let mut intervals = Vec::new();
        isolate(&chain, lo, b, v_lo, v_hi, &mut intervals);
        for (lo, hi) in intervals {
            roots.push(refine(&factor, &chain, lo, hi, &tol, mult));
        }
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(roots)
}

/// Roots repeated according to multiplicity.
pub fn flatten_roots(roots: &[RealRoot]) -> Vec<f64> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect()
}

fn isolate(
    chain: &[ParamPoly],
    lo: Rational,
    hi: Rational,
    v_lo: usize,
    v_hi: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    match v_lo - v_hi {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / int(2);
            let v_mid = variations(chain, &mid);
            isolate(chain, lo, mid.clone(), v_lo, v_mid, out);
            isolate(chain, mid, hi, v_mid, v_hi, out);
        }
    }
}

fn refine(
    f: &ParamPoly,
    chain: &[ParamPoly],
    mut lo: Rational,
    mut hi: Rational,
    tol: &Rational,
    multiplicity: usize,
) -> RealRoot {
    let done = |value: Rational, multiplicity| RealRoot {
        value: to_f64(&value),
        multiplicity,
        lo: value.clone(),
        hi: value.clone(),
        exact: Some(value),
    };
    if f.sign_at(&hi) == 0 {
        return done(hi, multiplicity);
    }
    let two = int(2);
    let mut s_lo = f.sign_at(&lo);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let s_mid = f.sign_at(&mid);
        if s_mid == 0 {
            return done(mid, multiplicity);
        }
        let left = if s_lo != 0 {
            s_mid != s_lo
        } else {
            variations(chain, &lo) > variations(chain, &mid)
        };
        if left {
            hi = mid;
        } else {
            lo = mid;
            s_lo = s_mid;
        }
    }
    let q = simplest_between(&lo, &hi);
    if f.sign_at(&q) == 0 {
        return done(q, multiplicity);
    }
    RealRoot {
        value: to_f64(&((&lo + &hi) / &two)),
        multiplicity,
        lo,
        hi,
        exact: None,
    }
}

/// Rational with the smallest denominator in `[a, b]`.
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    if a.is_negative() && b.is_positive() || a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= b {
        return next;
    }
    let inner = simplest_between(&(Rational::one() / (b - &fl)), &(Rational::one() / (a - &fl)));
    fl + Rational::one() / inner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Var};

    fn x(c: &[i64]) -> ParamPoly {
        ParamPoly::from_ints(Var::X, c)
    }

    #[test]
    fn count_in_half_open_interval() {
        assert_eq!(sturm_count(&x(&[-1, 0, 1]), &int(0), &int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&x(&[1, 0, 1]), &int(-10), &int(10)).unwrap(), 0);
        // root exactly at the right end is included, at the left end excluded
        assert_eq!(sturm_count(&x(&[-1, 0, 1]), &int(-1), &int(1)).unwrap(), 1);
    }

    #[test]
    fn count_errors() {
        assert_eq!(sturm_count(&ParamPoly::zero(Var::X), &int(0), &int(1)), Err(Error::ZeroPolynomial));
        assert!(matches!(sturm_count(&x(&[1, 1]), &int(1), &int(1)), Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x-1)^3 (x+2)
        let p = &x(&[-1, 1]).pow(3) * &x(&[2, 1]);
        assert_eq!(sturm_count(&p, &int(-5), &int(5)).unwrap(), 2);
        assert_eq!(count_all_real(&p).unwrap(), 2);
    }

    #[test]
    fn quartic_with_double_root() {
        let roots = real_roots(&x(&[0, 0, -64, 0, 1]), DEFAULT_ROOT_TOL).unwrap();
        let got: Vec<_> = roots.iter().map(|r| (r.exact.clone(), r.multiplicity)).collect();
        assert_eq!(
            got,
            vec![(Some(int(-8)), 1), (Some(int(0)), 2), (Some(int(8)), 1)]
        );
        assert_eq!(flatten_roots(&roots), vec![-8.0, 0.0, 0.0, 8.0]);
    }

    #[test]
    fn irrational_roots() {
        let roots = real_roots(&x(&[-2, 0, 1]), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value + 2f64.sqrt()).abs() < 1e-12);
        assert!((roots[1].value - 2f64.sqrt()).abs() < 1e-12);
        assert!(roots.iter().all(|r| r.exact.is_none()));
    }

    #[test]
    fn rational_root_reconstructed() {
        // (3x - 1)(x^2 + 1)
        let p = &x(&[-1, 3]) * &x(&[1, 0, 1]);
        let roots = real_roots(&p, 1e-9).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].exact, Some(rat(1, 3)));
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_between(&rat(5, 2), &rat(7, 2)), int(3));
    }
}
