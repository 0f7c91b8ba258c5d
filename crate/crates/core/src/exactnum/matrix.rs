use num_traits::{One, Zero};

use super::{to_f64, ParamPoly, Rational, Var};
use crate::error::{Error, Result};

/// Dense row-major matrix over `Q[var]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    var: Var,
    entries: Vec<ParamPoly>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, var: Var) -> Self {
        ExactMatrix {
            rows,
            cols,
            var,
            entries: vec![ParamPoly::zero(var); rows * cols],
        }
    }

    pub fn identity(n: usize, var: Var) -> Self {
        let mut m = Self::zeros(n, n, var);
        for i in 0..n {
            m.set(i, i, ParamPoly::one(var));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, var: Var, mut f: impl FnMut(usize, usize) -> ParamPoly) -> Self {
        let mut m = Self::zeros(rows, cols, var);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rationals(rows: usize, cols: usize, data: &[Rational]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, Var::K0, |i, j| {
            ParamPoly::constant(Var::K0, data[i * cols + j].clone())
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ParamPoly) {
        self.entries[i * self.cols + j] = v.with_var(self.var);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ParamPoly::is_zero)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.var);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).try_add(&a.try_mul(b)?)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Self, f: impl Fn(&ParamPoly, &ParamPoly) -> Result<ParamPoly>) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_sub(b))
    }

    pub fn scale(&self, c: &ParamPoly) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|a| a.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn trace(&self) -> Result<ParamPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        (0..self.rows).try_fold(ParamPoly::zero(self.var), |acc, i| acc.try_add(self.get(i, i)))
    }

    /// Substitutes a rational value for the entry variable.
    pub fn eval_param(&self, at: &Rational) -> Self {
        ExactMatrix {
            entries: self
                .entries
                .iter()
                .map(|p| ParamPoly::constant(self.var, p.eval(at)))
                .collect(),
            ..self.clone()
        }
    }

    /// Entries as rationals; fails if any entry still depends on the variable.
    pub fn to_rationals(&self) -> Result<Vec<Rational>> {
        self.entries
            .iter()
            .map(|p| p.constant_value().ok_or(Error::NotRational))
            .collect()
    }

    pub fn to_f64(&self) -> Result<Vec<f64>> {
        Ok(self.to_rationals()?.iter().map(to_f64).collect())
    }

    /// Fraction-free (Bareiss) determinant. Every intermediate division is
    /// exact in `Q[var]`, so no rational functions appear.
    pub fn determinant(&self) -> Result<ParamPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ParamPoly::one(self.var));
        }
        let mut a = self.entries.clone();
        let mut sign = Rational::one();
        let mut prev = ParamPoly::one(self.var);
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            a.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(ParamPoly::zero(self.var)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i * n + j]
                        .try_mul(&a[k * n + k])?
                        .try_sub(&a[i * n + k].try_mul(&a[k * n + j])?)?;
                    let (q, r) = num.div_rem(&prev)?;
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i * n + j] = q;
                }
            }
            prev = a[k * n + k].clone();
        }
        Ok(a[n * n - 1].scale(&sign).with_var(self.var))
    }

    /// Basis of the right null space of a rational matrix, via reduced row
    /// echelon form. Each basis vector has a 1 in one free column.
    pub fn null_space(&self) -> Result<Vec<Vec<Rational>>> {
        let (rref, pivots) = rref(self.rows, self.cols, self.to_rationals()?);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref[r * self.cols + f].clone();
                }
                v
            })
            .collect())
    }

    /// One solution of `self * x = rhs` for a rational matrix (free variables
    /// set to zero), or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs of length {} for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let a = self.to_rationals()?;
        let w = self.cols + 1;
        let mut aug = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            aug.extend_from_slice(&a[i * self.cols..(i + 1) * self.cols]);
            aug.push(rhs[i].clone());
        }
        let (rref, pivots) = rref(self.rows, w, aug);
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rref[r * w + self.cols].clone();
        }
        Ok(Some(x))
    }
}

/// Gauss-Jordan elimination over Q; returns the reduced matrix and pivot
/// columns in row order.
fn rref(rows: usize, cols: usize, mut a: Vec<Rational>) -> (Vec<Rational>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = Rational::one() / &a[r * cols + c];
        for j in c..cols {
            a[r * cols + j] *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i * cols + c].is_zero() {
                continue;
            }
            let f = a[i * cols + c].clone();
            for j in c..cols {
                let t = &f * &a[r * cols + j];
                a[i * cols + j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}
