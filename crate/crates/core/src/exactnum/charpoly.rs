use std::fmt;

use num_traits::{One, Signed};

use super::{int, ExactMatrix, ParamPoly, Rational, Var};
use crate::error::{Error, Result};

/// Characteristic polynomial `det(λ I - M)` of a matrix over `Q[p]`:
/// a polynomial in λ whose coefficients are polynomials in the entry
/// variable `p`. `coeffs[k]` multiplies `λ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<ParamPoly>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<ParamPoly>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(ParamPoly::is_zero) {
            coeffs.pop();
        }
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ParamPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ParamPoly::zero(self.param_var()))
    }

    /// Variable of the coefficient ring.
    pub fn param_var(&self) -> Var {
        self.coeffs
            .iter()
            .find(|c| !c.is_constant())
            .map(ParamPoly::var)
            .unwrap_or(Var::K0)
    }

    /// Substitutes a value for the parameter, leaving a polynomial in λ.
    pub fn at(&self, param: &Rational) -> ParamPoly {
        ParamPoly::from_coeffs(Var::Lambda, self.coeffs.iter().map(|c| c.eval(param)).collect())
    }

    /// Rewrites the coefficient polynomials under `p = a * t`.
    pub fn reparametrize(&self, a: &Rational, var: Var) -> Self {
        CharPoly::from_coeffs(self.coeffs.iter().map(|c| c.rescale(a, var)).collect())
    }

    /// True when every odd power of λ has the zero polynomial as coefficient.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(ParamPoly::is_zero)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{k}"),
            };
            let (neg, body) = match c.constant_value() {
                Some(v) => {
                    let mag = super::fmt_rational(&v.abs());
                    let body = if k > 0 && mag == "1" { String::new() } else { mag };
                    (v.is_negative(), body)
                }
                None => {
                    // pull a leading minus out of the parenthesised coefficient
                    let neg = c.leading().is_negative();
                    let c = if neg { -c } else { c.clone() };
                    (neg, format!("({c})"))
                }
            };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            write!(f, "{body}{power}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Faddeev–LeVerrier: `M_k = A M_{k-1} + c_{n-k+1} I`,
/// `c_{n-k} = -tr(A M_k) / k`. Only divisions by the integers `k` occur, so
/// the recurrence is exact over `Q[p]`.
pub fn char_poly(a: &ExactMatrix) -> Result<CharPoly> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let var = a.var();
    let mut coeffs = vec![ParamPoly::zero(var); n + 1];
    coeffs[n] = ParamPoly::one(var);
    let id = ExactMatrix::identity(n, var);
    let mut m = ExactMatrix::zeros(n, n, var);
    for k in 1..=n {
        m = a.try_mul(&m)?.try_add(&id.scale(&coeffs[n - k + 1])?)?;
        let tr = a.try_mul(&m)?.trace()?;
        coeffs[n - k] = tr.scale(&-(Rational::one() / int(k as i64)));
    }
    Ok(CharPoly::from_coeffs(coeffs))
}
