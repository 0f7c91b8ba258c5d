use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{fmt_rational, int, ParamPoly, Rational, Var};

/// Normal-ordered element of the one-variable Weyl algebra with
/// coefficients in `Q[k0]`: `Σ c_ij x^i ∂^j`, keyed by `(i, j)`.
///
/// Zero coefficients are never stored, so structural equality is operator
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffOp {
    terms: BTreeMap<(u32, u32), ParamPoly>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Falling factorial `(k)_s = k (k-1) ... (k-s+1)`.
fn falling(k: u32, s: u32) -> BigInt {
    if s > k {
        return BigInt::zero();
    }
    (0..s).fold(BigInt::one(), |acc, i| acc * (k - i))
}

impl DiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, ParamPoly::one(Var::K0))
    }

    /// `c x^xpow ∂^dpow`.
    pub fn term(xpow: u32, dpow: u32, c: ParamPoly) -> Self {
        let mut op = Self::zero();
        op.add_term(xpow, dpow, c.with_var(Var::K0));
        op
    }

    pub fn rational(c: Rational) -> Self {
        Self::term(0, 0, ParamPoly::constant(Var::K0, c))
    }

    pub fn scalar(c: ParamPoly) -> Self {
        Self::term(0, 0, c)
    }

    /// Multiplication by `x^k`.
    pub fn x_pow(k: u32) -> Self {
        Self::term(k, 0, ParamPoly::one(Var::K0))
    }

    /// `∂^j = (d/dx)^j`.
    pub fn d_pow(j: u32) -> Self {
        Self::term(0, j, ParamPoly::one(Var::K0))
    }

    pub fn x() -> Self {
        Self::x_pow(1)
    }

    pub fn d() -> Self {
        Self::d_pow(1)
    }

    /// Euler operator `D = x ∂`.
    pub fn euler() -> Self {
        Self::term(1, 1, ParamPoly::one(Var::K0))
    }

    fn add_term(&mut self, xpow: u32, dpow: u32, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let key = (xpow, dpow);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum.with_var(Var::K0));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `((xpow, dpow), coefficient)` in key order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ParamPoly)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coeff(&self, xpow: u32, dpow: u32) -> ParamPoly {
        self.terms
            .get(&(xpow, dpow))
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(Var::K0))
    }

    /// Highest derivative order present (0 for the zero operator).
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Largest `i - j` over the terms: how far the operator raises degree.
    pub fn degree_shift(&self) -> Option<i64> {
        self.terms.keys().map(|&(i, j)| i as i64 - j as i64).max()
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.scale(&ParamPoly::constant(Var::K0, c.clone()))
    }

    /// Substitutes a value for `k0` in every coefficient.
    pub fn eval_param(&self, k0: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, ParamPoly::constant(Var::K0, v.eval(k0)));
        }
        out
    }

    /// Coefficients as rationals, or `None` if any depends on `k0`.
    pub fn rational_terms(&self) -> Option<BTreeMap<(u32, u32), Rational>> {
        self.terms
            .iter()
            .map(|(&k, v)| v.constant_value().map(|c| (k, c)))
            .collect()
    }

    /// Normal-ordered product using
    /// `∂^j x^k = Σ_s C(j, s) (k)_s x^(k-s) ∂^(j-s)`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                let ab = a * b;
                for s in 0..=j.min(k) {
                    let f = binomial(j, s) * falling(k, s);
                    out.add_term(i + k - s, j - s + l, ab.scale(&Rational::from_integer(f)));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.compose(self))
    }

    /// Action on a polynomial in `x` given by its coefficients (lowest power
    /// first), each in `Q[k0]`.
    pub fn apply(&self, p: &[ParamPoly]) -> Vec<ParamPoly> {
        let mut out: Vec<ParamPoly> = Vec::new();
        for (&(i, j), c) in &self.terms {
            for (m, pm) in p.iter().enumerate() {
                let m = m as u32;
                if pm.is_zero() || j > m {
                    continue;
                }
                let deg = (m - j + i) as usize;
                if out.len() <= deg {
                    out.resize(deg + 1, ParamPoly::zero(Var::K0));
                }
                let f = Rational::from_integer(falling(m, j));
                out[deg] = &out[deg] + &(c * pm).scale(&f);
            }
        }
        while out.last().is_some_and(ParamPoly::is_zero) {
            out.pop();
        }
        out
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.terms {
            out.add_term(i, j, v.clone());
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale_rat(&int(-1))
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let mut mono = String::new();
            match i {
                0 => {}
                1 => mono.push('x'),
                _ => mono.push_str(&format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => mono.push('∂'),
                _ => mono.push_str(&format!("∂^{j}")),
            }
            let (neg, coeff) = match c.constant_value() {
                Some(v) => {
                    let mag = fmt_rational(&v.abs());
                    let coeff = if mag == "1" && !mono.is_empty() { String::new() } else { mag };
                    (v.is_negative(), coeff)
                }
                None => (false, format!("({c})")),
            };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            write!(f, "{coeff}{mono}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn r(c: i64) -> ParamPoly {
        ParamPoly::constant(Var::K0, int(c))
    }

    #[test]
    fn canonical_commutation() {
        let dx = &DiffOp::d() * &DiffOp::x();
        assert_eq!(dx, &DiffOp::euler() + &DiffOp::one());
        assert_eq!(&dx - &(&DiffOp::x() * &DiffOp::d()), DiffOp::one());
    }

    #[test]
    fn euler_squared() {
        let d = DiffOp::euler();
        let expected = &DiffOp::term(2, 2, r(1)) + &DiffOp::euler();
        assert_eq!(&d * &d, expected);
    }

    #[test]
    fn high_order_expansion() {
        // ∂^2 x^2 = x^2 ∂^2 + 4 x ∂ + 2
        let lhs = &DiffOp::d_pow(2) * &DiffOp::x_pow(2);
        let rhs = &(&DiffOp::term(2, 2, r(1)) + &DiffOp::term(1, 1, r(4))) + &DiffOp::rational(int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_on_monomials() {
        let x3 = vec![r(0), r(0), r(0), r(1)];
        assert_eq!(DiffOp::d().apply(&x3), vec![r(0), r(0), r(3)]);
        // (D - 3) x^3 = 0
        let op = &DiffOp::euler() - &DiffOp::rational(int(3));
        assert!(op.apply(&x3).is_empty());
    }

    #[test]
    fn zero_terms_are_dropped() {
        let a = DiffOp::x();
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).term_count(), 0);
    }

    #[test]
    fn display() {
        let op = &DiffOp::term(2, 1, r(1)) - &DiffOp::term(1, 0, r(2));
        assert_eq!(op.to_string(), "x^2∂ - 2x");
    }
}
