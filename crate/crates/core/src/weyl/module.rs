use serde::Serialize;

use super::MatOp;
use crate::error::{Error, Result};
use crate::exactnum::{int, ExactMatrix, ParamPoly, Rational, Var};

/// Pair of polynomials in `x` with coefficients in `Q[k0]`, lowest power
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Doublet {
    pub top: Vec<ParamPoly>,
    pub bottom: Vec<ParamPoly>,
}

fn trim(mut v: Vec<ParamPoly>) -> Vec<ParamPoly> {
    while v.last().is_some_and(ParamPoly::is_zero) {
        v.pop();
    }
    v
}

impl Doublet {
    pub fn new(top: Vec<ParamPoly>, bottom: Vec<ParamPoly>) -> Self {
        Doublet {
            top: trim(top),
            bottom: trim(bottom),
        }
    }

    pub fn from_rationals(top: &[Rational], bottom: &[Rational]) -> Self {
        let lift = |v: &[Rational]| v.iter().map(|c| ParamPoly::constant(Var::K0, c.clone())).collect();
        Self::new(lift(top), lift(bottom))
    }

    pub fn from_ints(top: &[i64], bottom: &[i64]) -> Self {
        let lift = |v: &[i64]| v.iter().map(|&c| int(c)).collect::<Vec<_>>();
        Self::from_rationals(&lift(top), &lift(bottom))
    }

    /// `x^degree` in the given component (0 = top, 1 = bottom).
    pub fn monomial(component: usize, degree: usize) -> Self {
        let mut v = vec![ParamPoly::zero(Var::K0); degree + 1];
        v[degree] = ParamPoly::one(Var::K0);
        if component == 0 {
            Self::new(v, Vec::new())
        } else {
            Self::new(Vec::new(), v)
        }
    }

    pub(crate) fn add_components(a: &[ParamPoly], b: &[ParamPoly]) -> Vec<ParamPoly> {
        let len = a.len().max(b.len());
        let zero = ParamPoly::zero(Var::K0);
        trim((0..len)
            .map(|k| a.get(k).unwrap_or(&zero) + b.get(k).unwrap_or(&zero))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.top.is_empty() && self.bottom.is_empty()
    }

    pub fn component(&self, which: usize) -> &[ParamPoly] {
        if which == 0 {
            &self.top
        } else {
            &self.bottom
        }
    }

    /// Coordinates on the monomial basis of `spec`; `None` if a component
    /// exceeds its degree bound.
    pub fn to_coords(&self, spec: &ModuleSpec) -> Option<Vec<ParamPoly>> {
        let mut out = Vec::with_capacity(spec.dim());
        for (comp, bound) in [(0, spec.deg_top), (1, spec.deg_bottom)] {
            let c = self.component(comp);
            if c.len() as i64 > bound + 1 {
                return None;
            }
            for k in 0..=bound {
                out.push(c.get(k as usize).cloned().unwrap_or_else(|| ParamPoly::zero(Var::K0)));
            }
        }
        Some(out)
    }

    pub fn from_coords(spec: &ModuleSpec, coords: &[ParamPoly]) -> Self {
        let split = (spec.deg_top + 1) as usize;
        Self::new(coords[..split].to_vec(), coords[split..].to_vec())
    }
}

/// `P(deg_top) ⊕ P(deg_bottom)`; a degree of -1 stands for the zero space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSpec {
    pub deg_top: i64,
    pub deg_bottom: i64,
}

impl ModuleSpec {
    pub fn new(deg_top: i64, deg_bottom: i64) -> Result<Self> {
        if deg_top < -1 || deg_bottom < -1 || deg_top + deg_bottom + 2 <= 0 {
            return Err(Error::InvalidParams(format!(
                "module P({deg_top}) + P({deg_bottom}) is empty or malformed"
            )));
        }
        Ok(ModuleSpec { deg_top, deg_bottom })
    }

    pub fn dim(&self) -> usize {
        (self.deg_top + self.deg_bottom + 2) as usize
    }

    /// `(component, degree)` of basis vector `k`: top degrees ascending,
    /// then bottom degrees ascending.
    pub fn basis(&self, k: usize) -> (usize, usize) {
        let top = (self.deg_top + 1) as usize;
        if k < top {
            (0, k)
        } else {
            (1, k - top)
        }
    }

    pub fn index(&self, component: usize, degree: usize) -> usize {
        if component == 0 {
            degree
        } else {
            (self.deg_top + 1) as usize + degree
        }
    }

    fn bound(&self, component: usize) -> i64 {
        if component == 0 {
            self.deg_top
        } else {
            self.deg_bottom
        }
    }
}

/// A monomial that the operator sends outside the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leak {
    /// Basis vector the overflow came from.
    pub basis_index: usize,
    pub component: usize,
    pub degree: usize,
    pub coeff: ParamPoly,
}

/// Matrix of an operator on the monomial basis of a [`ModuleSpec`], with
/// the overflow certificate. When `leakage` is empty the matrix is the
/// exact representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedMatrix {
    pub spec: ModuleSpec,
    pub matrix: ExactMatrix,
    pub leakage: Vec<Leak>,
}

impl RestrictedMatrix {
    pub fn preserves(&self) -> bool {
        self.leakage.is_empty()
    }

    /// The matrix, or [`Error::Leakage`] if the operator leaves the module.
    pub fn into_preserved(self) -> Result<ExactMatrix> {
        if self.leakage.is_empty() {
            Ok(self.matrix)
        } else {
            Err(Error::Leakage(self.leakage.len()))
        }
    }
}

/// Column `k` is the image of basis monomial `k`; overflowing monomials go
/// to the leakage list instead of being dropped.
pub fn restrict(op: &MatOp, spec: &ModuleSpec) -> RestrictedMatrix {
    let dim = spec.dim();
    let mut matrix = ExactMatrix::zeros(dim, dim, Var::K0);
    let mut leakage = Vec::new();
    for k in 0..dim {
        let (comp, deg) = spec.basis(k);
        let image = op.apply(&Doublet::monomial(comp, deg));
        for out_comp in 0..2 {
            for (d, c) in image.component(out_comp).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if d as i64 <= spec.bound(out_comp) {
                    matrix.set(spec.index(out_comp, d), k, c.clone());
                } else {
                    leakage.push(Leak {
                        basis_index: k,
                        component: out_comp,
                        degree: d,
                        coeff: c.clone(),
                    });
                }
            }
        }
    }
    RestrictedMatrix {
        spec: *spec,
        matrix,
        leakage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::DiffOp;

    #[test]
    fn multiplication_by_x_leaks() {
        let spec = ModuleSpec::new(2, 0).unwrap();
        let r = restrict(&MatOp::scalar(DiffOp::x()), &spec);
        assert!(!r.preserves());
        // x * x^2 from the top and x * 1 from the bottom both overflow
        assert_eq!(r.leakage.len(), 2);
        assert_eq!((r.leakage[0].component, r.leakage[0].degree), (0, 3));
    }

    #[test]
    fn derivative_preserves() {
        let spec = ModuleSpec::new(3, 1).unwrap();
        let r = restrict(&MatOp::scalar(DiffOp::d()), &spec);
        assert!(r.preserves());
        assert_eq!(r.matrix.get(0, 1).constant_value(), Some(int(1)));
        assert_eq!(r.matrix.get(2, 3).constant_value(), Some(int(3)));
        assert_eq!(r.matrix.get(4, 5).constant_value(), Some(int(1)));
    }

    #[test]
    fn empty_components() {
        assert!(ModuleSpec::new(-1, -1).is_err());
        let spec = ModuleSpec::new(-1, 2).unwrap();
        assert_eq!(spec.dim(), 3);
        assert_eq!(spec.basis(0), (1, 0));
        let r = restrict(&MatOp::sigma_plus(), &spec);
        assert_eq!(r.leakage.len(), 3);
    }

    #[test]
    fn coords_round_trip() {
        let spec = ModuleSpec::new(1, 2).unwrap();
        let v = Doublet::from_ints(&[1, 2], &[0, 0, 5]);
        let c = v.to_coords(&spec).unwrap();
        assert_eq!(Doublet::from_coords(&spec, &c), v);
        assert_eq!(Doublet::from_ints(&[1, 2, 3], &[]).to_coords(&spec), None);
    }
}
