use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, ExactMatrix, Rational};
use crate::generators::{combined_multiplet, quintet_s, sl2_gens, AlgebraParams, MixSpec};
use crate::weyl::{anticommutator, DiffOp, MatOp};

use super::Generators;

/// Top degree used by the Δ = 4 scan unless overridden.
pub const DELTA4_DEFAULT_N: u32 = 6;

/// Degree-≤1 bosonic monomials, block by block: `1, j+, j0, j-` of degree
/// `n-Δ` on the top component and of degree `n` on the bottom one. Their
/// span equals that of `1, σ3, T_α, σ3 T_α` (and contains `J`).
pub fn bosonic_linear_basis(params: &AlgebraParams) -> Vec<MatOp> {
    let mut out = Vec::with_capacity(8);
    for (block, n) in [(0, params.low()), (1, params.n as i64)] {
        let j = sl2_gens(n);
        for op in [DiffOp::one(), j.plus, j.zero, j.minus] {
            out.push(if block == 0 {
                MatOp::diag(op, DiffOp::zero())
            } else {
                MatOp::diag(DiffOp::zero(), op)
            });
        }
    }
    out
}

type Key = (usize, usize, u32, u32);

fn coords(op: &MatOp) -> Result<BTreeMap<Key, Rational>> {
    let mut out = BTreeMap::new();
    for r in 0..2 {
        for c in 0..2 {
            for (k, v) in op.entry(r, c).rational_terms().ok_or(Error::NotRational)? {
                out.insert((r, c, k.0, k.1), v);
            }
        }
    }
    Ok(out)
}

fn dot(a: &BTreeMap<Key, Rational>, b: &BTreeMap<Key, Rational>) -> Rational {
    a.iter()
        .filter_map(|(k, v)| b.get(k).map(|w| v * w))
        .fold(int(0), |acc, t| acc + t)
}

/// `op` minus its orthogonal projection (coefficient inner product) onto
/// the span of `basis`, computed exactly from the normal equations. Zero
/// iff `op` lies in the span.
pub fn linear_residual(op: &MatOp, basis: &[MatOp]) -> Result<MatOp> {
    let target = coords(op)?;
    let vecs = basis.iter().map(coords).collect::<Result<Vec<_>>>()?;
    let m = vecs.len();
    let gram: Vec<Rational> = (0..m)
        .flat_map(|i| (0..m).map(|j| dot(&vecs[i], &vecs[j])).collect::<Vec<_>>())
        .collect();
    let rhs: Vec<Rational> = vecs.iter().map(|v| dot(v, &target)).collect();
    let weights = ExactMatrix::from_rationals(m, m, &gram)?
        .solve(&rhs)?
        .expect("normal equations are always consistent");
    let proj = basis
        .iter()
        .zip(&weights)
        .fold(MatOp::zero(), |acc, (b, w)| &acc + &b.scale_rat(w));
    Ok(op - &proj)
}

/// Result of one Δ = 4 sample `F_α = Q̄_α + c P_α + D S_α`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c_mix: Rational,
    pub signs: Option<(i8, i8)>,
    pub n: u32,
    /// Normal-ordered terms left in the `{F_α, F_β}` (α ≤ β) after removing
    /// their projection onto the degree-≤1 bosonic span, summed over pairs.
    /// Zero would be a counterexample to the no-go statement.
    pub residual_quadratic_norm: usize,
    /// Number of pairs `(α, β)` whose anticommutator is not linear.
    pub nonlinear_pairs: usize,
    /// Highest derivative order among the residual terms.
    pub residual_max_order: u32,
}

impl ObstructionReport {
    pub fn is_counterexample(&self) -> bool {
        self.residual_quadratic_norm == 0
    }

    pub fn line(&self) -> String {
        let d = match self.signs {
            Some((a, b)) => format!("diag({a},{b})"),
            None => "0".to_string(),
        };
        format!(
            "DELTA4 n={} c_mix={} d={} residual_terms={} nonlinear_pairs={} max_order={}",
            self.n,
            crate::exactnum::fmt_rational(&self.c_mix),
            d,
            self.residual_quadratic_norm,
            self.nonlinear_pairs,
            self.residual_max_order
        )
    }
}

/// `c ∈ [-3, 3]` in steps of ¼, times the four sign matrices.
pub fn default_delta4_grid() -> Vec<MixSpec> {
    (-12..=12)
        .flat_map(|q| MixSpec::all_signs(&rat(q, 4)))
        .collect()
}

fn scan_point(gens: &Generators, quintet: &[MatOp], basis: &[MatOp], mix: &MixSpec) -> Result<ObstructionReport> {
    let f = combined_multiplet(&gens.fermionic, mix, quintet)?;
    let mut terms = 0;
    let mut pairs = 0;
    let mut max_order = 0;
    for a in 0..f.len() {
        for b in a..f.len() {
            let res = linear_residual(&anticommutator(&f[a], &f[b]), basis)?;
            if !res.is_zero() {
                pairs += 1;
                terms += res.term_count();
                for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    max_order = max_order.max(res.entry(r, c).order());
                }
            }
        }
    }
    Ok(ObstructionReport {
        c_mix: mix.c_mix.clone(),
        signs: mix.signs,
        n: gens.params.n,
        residual_quadratic_norm: terms,
        nonlinear_pairs: pairs,
        residual_max_order: max_order,
    })
}

/// Evaluates every grid point at Δ = 4, in grid order.
pub fn delta4_scan(n: u32, grid: &[MixSpec]) -> Result<Vec<ObstructionReport>> {
    let gens = Generators::new(AlgebraParams::new(n, 4)?);
    let quintet = quintet_s(&gens.bosonic);
    let basis = bosonic_linear_basis(&gens.params);
    grid.par_iter()
        .map(|mix| scan_point(&gens, &quintet, &basis, mix))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::commutator;

    #[test]
    fn projection_is_exact_on_the_span() {
        let p = AlgebraParams::new(5, 2).unwrap();
        let basis = bosonic_linear_basis(&p);
        let g = Generators::new(p);
        let combo = &(&g.bosonic.t_plus.scale_rat(&rat(3, 2)) + &g.bosonic.j) - &MatOp::sigma3();
        assert!(linear_residual(&combo, &basis).unwrap().is_zero());
        let sq = &g.bosonic.t_zero * &g.bosonic.t_zero;
        assert!(!linear_residual(&sq, &basis).unwrap().is_zero());
    }

    #[test]
    fn residual_is_orthogonal_to_basis() {
        let p = AlgebraParams::new(4, 2).unwrap();
        let basis = bosonic_linear_basis(&p);
        let g = Generators::new(p);
        let op = &(&g.bosonic.t_plus * &g.bosonic.t_minus) + &commutator(&g.bosonic.t_plus, &g.bosonic.t_zero);
        let res = linear_residual(&op, &basis).unwrap();
        let rc = coords(&res).unwrap();
        for b in &basis {
            assert_eq!(dot(&coords(b).unwrap(), &rc), int(0));
        }
    }

    #[test]
    fn sigma_three_combination_of_example_point() {
        let reports = delta4_scan(6, &[MixSpec::new(int(-1), 1, -1).unwrap()]).unwrap();
        assert!(reports[0].residual_quadratic_norm > 0);
    }

    #[test]
    fn fermionic_only_mix_gives_degree_delta() {
        // with c = 0 as well, F = Q̄ and every {F, F} vanishes trivially
        let r = delta4_scan(6, &[MixSpec::fermionic_only(int(0))]).unwrap();
        assert_eq!(r[0].residual_quadratic_norm, 0);
        let r = delta4_scan(6, &[MixSpec::fermionic_only(int(1))]).unwrap();
        assert!(r[0].residual_quadratic_norm > 0);
        // {Q̄_α, P_β} are quartic in the bosonic generators: fourth order
        assert_eq!(r[0].residual_max_order, 4);
    }

    #[test]
    fn non_rational_coefficients_rejected() {
        let op = MatOp::scalar(DiffOp::scalar(crate::exactnum::ParamPoly::variable(crate::exactnum::Var::K0)));
        assert_eq!(linear_residual(&op, &[]), Err(Error::NotRational));
    }
}
