use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{fmt_rational, to_f64, Rational};
use crate::error::{Error, Result};

/// Name of the indeterminate a [`ParamPoly`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Var {
    /// The coupling constant of the matrix Hamiltonian.
    K0,
    /// The rescaled coupling `c = -4 n k0`.
    C,
    X,
    /// `u = E^2`.
    U,
    Lambda,
}

impl Var {
    pub fn symbol(self) -> &'static str {
        match self {
            Var::K0 => "k0",
            Var::C => "c",
            Var::X => "x",
            Var::U => "u",
            Var::Lambda => "λ",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Dense univariate polynomial with rational coefficients, lowest power
/// first. The coefficient vector never ends in a zero, so the zero
/// polynomial has no coefficients and `degree()` returns `None`.
///
/// Constants are compatible with every variable tag; arithmetic between two
/// non-constant polynomials in different variables is an error.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.var == other.var || self.coeffs.len() <= 1)
    }
}

impl Eq for ParamPoly {}

impl Hash for ParamPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl ParamPoly {
    pub fn from_coeffs(var: Var, coeffs: Vec<Rational>) -> Self {
        let mut p = ParamPoly { var, coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        Self::from_coeffs(var, coeffs.iter().map(|&c| super::int(c)).collect())
    }

    pub fn zero(var: Var) -> Self {
        ParamPoly { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    pub fn monomial(var: Var, c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Self::from_coeffs(var, coeffs)
    }

    /// The indeterminate itself.
    pub fn variable(var: Var) -> Self {
        Self::monomial(var, Rational::one(), 1)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `var^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    fn joint_var(&self, other: &Self) -> Result<Var> {
        if self.var == other.var || other.is_constant() {
            Ok(self.var)
        } else if self.is_constant() {
            Ok(other.var)
        } else {
            Err(Error::VarMismatch {
                left: self.var,
                right: other.var,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let var = self.joint_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Self::from_coeffs(var, coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let var = self.joint_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Ok(Self::from_coeffs(var, coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let var = self.joint_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(var));
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self::from_coeffs(var, coeffs))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.var);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * at + to_f64(c))
    }

    /// Sign of `p(at)`: -1, 0 or 1.
    pub fn sign_at(&self, at: &Rational) -> i8 {
        let v = self.eval(at);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * super::int(k as i64))
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }

    /// `p(a t)` written in the variable `t` tagged `var`.
    pub fn rescale(&self, a: &Rational, var: Var) -> Self {
        let mut factor = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &factor);
            factor *= a;
        }
        Self::from_coeffs(var, coeffs)
    }

    /// Keeps only the even powers and halves the exponents: `q(u)` with
    /// `p(t) = q(t^2) + t r(t^2)`.
    pub fn even_part_in(&self, var: Var) -> Self {
        Self::from_coeffs(var, self.coeffs.iter().step_by(2).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(Rational::one() / lc))
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let var = self.joint_var(divisor)?;
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(var, quot), Self::from_coeffs(var, rem)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        a.var = self.joint_var(other)?;
        b.var = a.var;
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative())?;
        Ok(self.div_rem(&g)?.0.monic())
    }

    /// Yun's algorithm: returns `(f_i, i)` with `p = lc * prod f_i^i`, each
    /// `f_i` monic, square-free, pairwise coprime and non-constant.
    pub fn square_free_decomposition(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        let d = self.derivative();
        let a0 = self.gcd(&d)?;
        let mut b = self.div_rem(&a0)?.0;
        let mut c = d.div_rem(&a0)?.0;
        let mut dd = c.try_sub(&b.derivative())?;
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a)?.0;
            c = dd.div_rem(&a)?.0;
            dd = c.try_sub(&b.derivative())?;
            i += 1;
        }
        Ok(out)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_add(rhs).expect("ParamPoly addition across variables")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_sub(rhs).expect("ParamPoly subtraction across variables")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_mul(rhs).expect("ParamPoly product across variables")
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                f.write_str(&fmt_rational(&mag))?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{}", self.var, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn x(c: &[i64]) -> ParamPoly {
        ParamPoly::from_ints(Var::X, c)
    }

    #[test]
    fn product_of_parameters() {
        let k0 = ParamPoly::variable(Var::K0);
        assert_eq!(&k0 * &k0, ParamPoly::monomial(Var::K0, int(1), 2));
    }

    #[test]
    fn sum_cancels_to_monomial() {
        assert_eq!(&x(&[-1, 1]) + &x(&[1]), x(&[0, 1]));
    }

    #[test]
    fn hand_expansion() {
        assert_eq!(&x(&[3, 2]) * &x(&[-3, 1]), x(&[-9, -3, 2]));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = ParamPoly::variable(Var::X);
        let b = ParamPoly::variable(Var::K0);
        assert!(matches!(a.try_add(&b), Err(Error::VarMismatch { .. })));
        // constants adopt the other operand's variable
        let c = ParamPoly::constant(Var::K0, int(2));
        assert_eq!(a.try_mul(&c).unwrap().var(), Var::X);
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(ParamPoly::zero(Var::X).degree(), None);
        assert_eq!(x(&[0, 0, 0]).degree(), None);
        assert_eq!(x(&[5]).degree(), Some(0));
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = &(&x(&[-1, 1]) * &x(&[-1, 1])) * &x(&[2, 1]);
        let (q, r) = p.div_rem(&x(&[-1, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, &x(&[-1, 1]) * &x(&[2, 1]));
        assert_eq!(p.gcd(&p.derivative()).unwrap(), x(&[-1, 1]));
        assert_eq!(p.square_free_part().unwrap(), &x(&[-1, 1]) * &x(&[2, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // x^2 (x - 8)(x + 8) * 3
        let p = x(&[0, 0, -64, 0, 1]).scale(&int(3));
        let dec = p.square_free_decomposition().unwrap();
        assert_eq!(dec, vec![(x(&[-64, 0, 1]), 1), (x(&[0, 1]), 2)]);
    }

    #[test]
    fn rescale_and_even_part() {
        let p = x(&[1, 2, 3]);
        assert_eq!(p.rescale(&rat(1, 2), Var::C), ParamPoly::from_coeffs(Var::C, vec![int(1), int(1), rat(3, 4)]));
        assert_eq!(x(&[4, 0, 5, 0, 6]).even_part_in(Var::U), ParamPoly::from_ints(Var::U, &[4, 5, 6]));
    }

    #[test]
    fn display() {
        assert_eq!(x(&[-9, -3, 2]).to_string(), "2x^2 - 3x - 9");
        assert_eq!(ParamPoly::from_coeffs(Var::C, vec![rat(1, 2), int(-1)]).to_string(), "-c + 1/2");
    }
}
