use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{DiffOp, Doublet};
use crate::exactnum::{int, ParamPoly, Rational};

/// 2x2 matrix of [`DiffOp`]s acting on polynomial doublets `(top, bottom)`.
///
/// `σ-` maps the top component into the bottom one (entry `(1, 0)`), `σ+`
/// maps bottom into top (entry `(0, 1)`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatOp {
    entries: [[DiffOp; 2]; 2],
}

impl MatOp {
    pub fn new(entries: [[DiffOp; 2]; 2]) -> Self {
        MatOp { entries }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::diag(DiffOp::one(), DiffOp::one())
    }

    pub fn diag(top: DiffOp, bottom: DiffOp) -> Self {
        MatOp {
            entries: [[top, DiffOp::zero()], [DiffOp::zero(), bottom]],
        }
    }

    /// Same scalar operator on both components.
    pub fn scalar(op: DiffOp) -> Self {
        Self::diag(op.clone(), op)
    }

    /// `op σ+`: acts on the bottom component and lands in the top one.
    pub fn upper(op: DiffOp) -> Self {
        MatOp {
            entries: [[DiffOp::zero(), op], [DiffOp::zero(), DiffOp::zero()]],
        }
    }

    /// `op σ-`: acts on the top component and lands in the bottom one.
    pub fn lower(op: DiffOp) -> Self {
        MatOp {
            entries: [[DiffOp::zero(), DiffOp::zero()], [op, DiffOp::zero()]],
        }
    }

    pub fn sigma_plus() -> Self {
        Self::upper(DiffOp::one())
    }

    pub fn sigma_minus() -> Self {
        Self::lower(DiffOp::one())
    }

    pub fn sigma1() -> Self {
        &Self::sigma_plus() + &Self::sigma_minus()
    }

    pub fn sigma3() -> Self {
        Self::diag(DiffOp::one(), DiffOp::rational(int(-1)))
    }

    pub fn entry(&self, row: usize, col: usize) -> &DiffOp {
        &self.entries[row][col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut DiffOp {
        &mut self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(DiffOp::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[0][1].is_zero() && self.entries[1][0].is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.entries.iter().flatten().map(DiffOp::term_count).sum()
    }

    fn map(&self, f: impl Fn(&DiffOp) -> DiffOp) -> Self {
        MatOp {
            entries: [
                [f(&self.entries[0][0]), f(&self.entries[0][1])],
                [f(&self.entries[1][0]), f(&self.entries[1][1])],
            ],
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&DiffOp, &DiffOp) -> DiffOp) -> Self {
        let e = |r: usize, c: usize| f(&self.entries[r][c], &other.entries[r][c]);
        MatOp {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        self.map(|d| d.scale(c))
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.map(|d| d.scale_rat(c))
    }

    pub fn eval_param(&self, k0: &Rational) -> Self {
        self.map(|d| d.eval_param(k0))
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let e = |r: usize, c: usize| {
            &self.entries[r][0].compose(&rhs.entries[0][c]) + &self.entries[r][1].compose(&rhs.entries[1][c])
        };
        MatOp {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn apply(&self, v: &Doublet) -> Doublet {
        let add = |a: Vec<ParamPoly>, b: Vec<ParamPoly>| Doublet::add_components(&a, &b);
        Doublet {
            top: add(self.entries[0][0].apply(&v.top), self.entries[0][1].apply(&v.bottom)),
            bottom: add(self.entries[1][0].apply(&v.top), self.entries[1][1].apply(&v.bottom)),
        }
    }
}

impl Add for &MatOp {
    type Output = MatOp;
    fn add(self, rhs: &MatOp) -> MatOp {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &MatOp {
    type Output = MatOp;
    fn sub(self, rhs: &MatOp) -> MatOp {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &MatOp {
    type Output = MatOp;
    fn neg(self) -> MatOp {
        self.map(|d| -d)
    }
}

impl Mul for &MatOp {
    type Output = MatOp;
    fn mul(self, rhs: &MatOp) -> MatOp {
        self.compose(rhs)
    }
}

impl fmt::Display for MatOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1]
        )
    }
}
