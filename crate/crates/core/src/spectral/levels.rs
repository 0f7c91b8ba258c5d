use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{restricted, HamiltonianSpec};
use crate::error::{Error, Result};
use crate::exactnum::{char_poly, dyadic_from_f64, int, real_roots, to_f64, ExactMatrix, ParamPoly, Rational, Var};

const ROOT_TOL: f64 = 1e-15;
/// Relative pivot threshold of the floating-point null space.
const RANK_TOL: f64 = 1e-9;

/// One eigenvector `(p1, p2)` on `P(n) ⊕ P(n-2)`, coefficients ascending in
/// `x`, scaled so the highest nonzero coefficient of `p1` is `+1` (of `p2`
/// when `p1 = 0`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenVector {
    pub top: Vec<f64>,
    pub bottom: Vec<f64>,
    #[serde(skip)]
    pub exact: Option<(Vec<Rational>, Vec<Rational>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    pub multiplicity: usize,
    /// Dimension of the eigenspace.
    pub geometric: usize,
    pub vectors: Vec<EigenVector>,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&crate::exactnum::fmt_rational(r)),
        None => s.serialize_none(),
    }
}

/// Spectral polynomial at a fixed `k0`, its real roots and eigenvectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraicSpectrum {
    pub spec: HamiltonianSpec,
    #[serde(serialize_with = "ser_poly")]
    pub char_poly: ParamPoly,
    pub levels: Vec<Level>,
}

fn ser_poly<S: serde::Serializer>(p: &ParamPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl AlgebraicSpectrum {
    /// All `2n` energies, ascending, repeated by multiplicity.
    pub fn energies(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity))
            .collect()
    }
}

pub fn algebraic_spectrum(spec: &HamiltonianSpec) -> Result<AlgebraicSpectrum> {
    algebraic_spectrum_with_tol(spec, ROOT_TOL)
}

/// [`algebraic_spectrum`] with irrational roots isolated to width `root_tol`.
pub fn algebraic_spectrum_with_tol(spec: &HamiltonianSpec, root_tol: f64) -> Result<AlgebraicSpectrum> {
    if !(root_tol > 0.0 && root_tol < 1e-3) {
        return Err(Error::InvalidParams(format!("root tolerance must lie in (0, 1e-3), got {root_tol}")));
    }
    let m = restricted(spec)?;
    let p = char_poly(&m)?.at(&spec.k0);
    let roots = real_roots(&p, root_tol)?;
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    let dim = m.rows();
    if total != dim {
        return Err(Error::InvalidParams(format!(
            "spectral polynomial has {total} real roots out of {dim}"
        )));
    }
    let a = m.to_rationals()?;
    let mut levels = Vec::with_capacity(roots.len());
    for r in roots {
        let vectors = match &r.exact {
            Some(e) => exact_null_vectors(&a, dim, e, spec)?,
            None => float_null_vectors(&m.to_f64()?, dim, r.value, spec),
        };
        levels.push(Level {
            energy: r.value,
            exact: r.exact.clone(),
            multiplicity: r.multiplicity,
            geometric: vectors.len(),
            vectors,
        });
    }
    Ok(AlgebraicSpectrum {
        spec: spec.clone(),
        char_poly: p,
        levels,
    })
}

fn split<T: Clone>(v: &[T], spec: &HamiltonianSpec) -> (Vec<T>, Vec<T>) {
    let top = spec.n as usize + 1;
    (v[..top].to_vec(), v[top..].to_vec())
}

fn exact_null_vectors(a: &[Rational], dim: usize, e: &Rational, spec: &HamiltonianSpec) -> Result<Vec<EigenVector>> {
    let mut shifted = a.to_vec();
    for i in 0..dim {
        shifted[i * dim + i] -= e;
    }
    let basis = ExactMatrix::from_rationals(dim, dim, &shifted)?.null_space()?;
    Ok(basis
        .into_iter()
        .map(|mut v| {
            let (top, bottom) = split(&v, spec);
            // top components come first, so this prefers p1's leading term
            let lead = top
                .iter()
                .rev()
                .chain(bottom.iter().rev())
                .find(|c| !c.is_zero())
                .cloned()
                .expect("null vector is nonzero");
            for c in v.iter_mut() {
                *c = &*c / &lead;
            }
            let (top, bottom) = split(&v, spec);
            EigenVector {
                top: top.iter().map(to_f64).collect(),
                bottom: bottom.iter().map(to_f64).collect(),
                exact: Some((top, bottom)),
            }
        })
        .collect())
}

/// Null space of `A - e I` by Gaussian elimination with complete pivoting.
fn float_null_vectors(a: &[f64], dim: usize, e: f64, spec: &HamiltonianSpec) -> Vec<EigenVector> {
    let mut m = a.to_vec();
    for i in 0..dim {
        m[i * dim + i] -= e;
    }
    let scale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let mut cols: Vec<usize> = (0..dim).collect();
    let mut rank = 0;
    while rank < dim {
        let (mut pr, mut pc, mut best) = (rank, rank, 0.0);
        for r in rank..dim {
            for c in rank..dim {
                let v = m[r * dim + c].abs();
                if v > best {
                    (pr, pc, best) = (r, c, v);
                }
            }
        }
        if best <= RANK_TOL * scale {
            break;
        }
        for c in 0..dim {
            m.swap(rank * dim + c, pr * dim + c);
        }
        for r in 0..dim {
            m.swap(r * dim + rank, r * dim + pc);
        }
        cols.swap(rank, pc);
        let p = m[rank * dim + rank];
        for r in 0..dim {
            if r == rank {
                continue;
            }
            let f = m[r * dim + rank] / p;
            if f != 0.0 {
                for c in rank..dim {
                    m[r * dim + c] -= f * m[rank * dim + c];
                }
            }
        }
        rank += 1;
    }
    (rank..dim)
        .map(|free| {
            let mut permuted = vec![0.0; dim];
            permuted[free] = 1.0;
            for r in 0..rank {
                permuted[r] = -m[r * dim + free] / m[r * dim + r];
            }
            let mut v = vec![0.0; dim];
            for (k, &c) in cols.iter().enumerate() {
                v[c] = permuted[k];
            }
            normalize_f64(&v, spec)
        })
        .collect()
}

fn normalize_f64(v: &[f64], spec: &HamiltonianSpec) -> EigenVector {
    let big = v.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let tiny = 1e-12 * big;
    let (top, bottom) = split(v, spec);
    let lead = top
        .iter()
        .rev()
        .find(|c| c.abs() > tiny)
        .or_else(|| bottom.iter().rev().find(|c| c.abs() > tiny))
        .copied()
        .unwrap_or(1.0);
    let clean = |xs: Vec<f64>| -> Vec<f64> {
        xs.into_iter()
            .map(|c| if c.abs() > tiny { c / lead } else { 0.0 })
            .collect()
    };
    EigenVector {
        top: clean(top),
        bottom: clean(bottom),
        exact: None,
    }
}

/// Eigenfunction in `y` for one eigenvector: both components times
/// `exp(-y⁴/4)`, the top `p1(y²)`, the bottom `k0 p1'(x) + p2(x)` at `x = y²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YEigenfunction {
    pub energy: f64,
    /// Polynomial parts in `x = y²`, ascending.
    pub top_x: Vec<f64>,
    pub bottom_x: Vec<f64>,
    /// The same in `y` (odd powers vanish).
    pub top_y: Vec<f64>,
    pub bottom_y: Vec<f64>,
    /// `(k1, k2)` real zeros in `y`; `None` for a degenerate level, where
    /// the basis of the eigenspace is not canonical.
    pub nodes: Option<(usize, usize)>,
}

fn to_y(xs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; (2 * xs.len()).saturating_sub(1)];
    for (k, c) in xs.iter().enumerate() {
        out[2 * k] = *c;
    }
    out
}

/// Real zeros in `y` of `p(y²)`: each positive root in `x` gives two, a
/// root at `x = 0` one.
pub fn count_nodes(p: &ParamPoly) -> Result<usize> {
    if p.is_zero() || p.is_constant() {
        return Ok(0);
    }
    let roots = real_roots(p, 1e-12)?;
    Ok(roots
        .iter()
        .map(|r| match &r.exact {
            Some(e) if e.is_zero() => 1,
            Some(e) if e.is_positive() => 2,
            Some(_) => 0,
            None if r.value.abs() < 1e-9 => 1,
            None if r.value > 0.0 => 2,
            None => 0,
        })
        .sum())
}

fn x_poly(coeffs: &[Rational]) -> ParamPoly {
    ParamPoly::from_coeffs(Var::X, coeffs.to_vec())
}

fn dyadic_poly(coeffs: &[f64]) -> ParamPoly {
    ParamPoly::from_coeffs(Var::X, coeffs.iter().map(|c| dyadic_from_f64(*c, 52)).collect())
}

/// `k0 p1' + p2` as coefficient lists.
fn bottom_component(k0: &Rational, top: &[Rational], bottom: &[Rational]) -> Vec<Rational> {
    let len = bottom.len().max(top.len().saturating_sub(1));
    (0..len)
        .map(|k| {
            let deriv = top.get(k + 1).map(|c| c * int(k as i64 + 1) * k0).unwrap_or_default();
            deriv + bottom.get(k).cloned().unwrap_or_default()
        })
        .collect()
}

fn bottom_component_f64(k0: f64, top: &[f64], bottom: &[f64]) -> Vec<f64> {
    let len = bottom.len().max(top.len().saturating_sub(1));
    (0..len)
        .map(|k| top.get(k + 1).map_or(0.0, |c| c * (k + 1) as f64 * k0) + bottom.get(k).copied().unwrap_or(0.0))
        .collect()
}

pub fn eigenfunctions_y(spectrum: &AlgebraicSpectrum) -> Result<Vec<YEigenfunction>> {
    let k0 = &spectrum.spec.k0;
    let k0f = to_f64(k0);
    let mut out = Vec::new();
    for level in &spectrum.levels {
        if level.geometric < level.multiplicity && level.geometric < 2 {
            return Err(Error::DefectiveEigenvalue {
                value: level.energy,
                algebraic: level.multiplicity,
                geometric: level.geometric,
            });
        }
        let degenerate = level.vectors.len() > 1;
        for v in &level.vectors {
            let bottom_x = bottom_component_f64(k0f, &v.top, &v.bottom);
            let nodes = if degenerate {
                None
            } else {
                let (t, b) = match &v.exact {
                    Some((top, bottom)) => (x_poly(top), x_poly(&bottom_component(k0, top, bottom))),
                    None => (dyadic_poly(&v.top), dyadic_poly(&bottom_x)),
                };
                Some((count_nodes(&t)?, count_nodes(&b)?))
            };
            out.push(YEigenfunction {
                energy: level.energy,
                top_y: to_y(&v.top),
                bottom_y: to_y(&bottom_x),
                top_x: v.top.clone(),
                bottom_x,
                nodes,
            });
        }
    }
    Ok(out)
}
