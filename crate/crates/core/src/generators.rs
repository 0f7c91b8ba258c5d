//! Constructors for the operator families preserving `P(n-Δ) ⊕ P(n)`:
//! the sl(2) realization, the bosonic block-diagonal generators, the two
//! fermionic towers, the Δ = 2 triplet `F` with its q(2) partners, and the
//! Δ = 4 quintet built from the bosonic generators.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, ParamPoly, Rational, Var};
use crate::weyl::{anticommutator, DiffOp, MatOp, ModuleSpec};

/// `n` is the top degree of the larger space, `delta` the degree gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraParams {
    pub n: u32,
    pub delta: u32,
}

impl AlgebraParams {
    pub fn new(n: u32, delta: u32) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidParams("delta must be at least 1".into()));
        }
        if (n as i64) - (delta as i64) < -1 {
            return Err(Error::InvalidParams(format!("n = {n} is too small for delta = {delta}")));
        }
        Ok(AlgebraParams { n, delta })
    }

    /// Degree of the smaller component, `n - Δ`.
    pub fn low(&self) -> i64 {
        self.n as i64 - self.delta as i64
    }

    /// `P(n-Δ) ⊕ P(n)`, smaller space on top.
    pub fn module(&self) -> ModuleSpec {
        ModuleSpec {
            deg_top: self.low(),
            deg_bottom: self.n as i64,
        }
    }

    fn require_delta(&self, delta: u32) -> Result<()> {
        if self.delta != delta {
            return Err(Error::InvalidParams(format!(
                "construction needs delta = {delta}, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

fn k(c: Rational) -> ParamPoly {
    ParamPoly::constant(Var::K0, c)
}

/// `(j+, j0, j-)` of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2 {
    pub plus: DiffOp,
    pub zero: DiffOp,
    pub minus: DiffOp,
}

impl Sl2 {
    /// `j_1, j_2, j_3 = j+, j0, j-`.
    pub fn indexed(&self, beta: usize) -> &DiffOp {
        match beta {
            1 => &self.plus,
            2 => &self.zero,
            3 => &self.minus,
            _ => panic!("sl(2) index {beta} out of range 1..=3"),
        }
    }
}

/// `j+ = x(D - n) = x^2 ∂ - n x`, `j0 = D - n/2`, `j- = ∂`.
pub fn sl2_gens(n: i64) -> Sl2 {
    Sl2 {
        plus: &DiffOp::term(2, 1, k(int(1))) - &DiffOp::term(1, 0, k(int(n))),
        zero: &DiffOp::euler() - &DiffOp::rational(rat(n, 2)),
        minus: DiffOp::d(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bosonic {
    pub t_plus: MatOp,
    pub t_zero: MatOp,
    pub t_minus: MatOp,
    /// Grading operator `½ diag(n + Δ, n)`.
    pub j: MatOp,
}

impl Bosonic {
    /// `T_1, T_2, T_3 = T+, T0, T-`.
    pub fn triplet(&self) -> [MatOp; 3] {
        [self.t_plus.clone(), self.t_zero.clone(), self.t_minus.clone()]
    }
}

pub fn bosonic_gens(params: &AlgebraParams) -> Bosonic {
    let lo = sl2_gens(params.low());
    let hi = sl2_gens(params.n as i64);
    let n = params.n as i64;
    let d = params.delta as i64;
    Bosonic {
        t_plus: MatOp::diag(lo.plus, hi.plus),
        t_zero: MatOp::diag(lo.zero, hi.zero),
        t_minus: MatOp::diag(lo.minus, hi.minus),
        j: MatOp::diag(DiffOp::rational(rat(n + d, 2)), DiffOp::rational(rat(n, 2))),
    }
}

/// `q̄_{α,(n)} = Π_{j=0}^{Δ-α} (D - (n+1-Δ) - j) · ∂^(α-1)`; the empty
/// product at `α = Δ+1` is the identity.
pub fn qbar_scalar(n: i64, delta: u32, alpha: u32) -> DiffOp {
    let shift = n + 1 - delta as i64;
    let mut op = DiffOp::one();
    for j in 0..=(delta as i64 - alpha as i64) {
        let factor = &DiffOp::euler() - &DiffOp::rational(int(shift + j));
        op = &op * &factor;
    }
    &op * &DiffOp::d_pow(alpha - 1)
}

/// The towers `Q_α = x^(α-1) σ-` and `Q̄_α = q̄_{α,(n)} σ+`, α = 1..=Δ+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fermionic {
    q: Vec<MatOp>,
    qbar: Vec<MatOp>,
}

impl Fermionic {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `Q_α`; indices outside `1..=Δ+1` give the zero operator.
    pub fn q(&self, alpha: i64) -> MatOp {
        tower(&self.q, alpha)
    }

    /// `Q̄_α`; indices outside `1..=Δ+1` give the zero operator.
    pub fn qbar(&self, alpha: i64) -> MatOp {
        tower(&self.qbar, alpha)
    }

    /// `P_α = Q_{Δ+2-α}`, which transforms like `Q̄_α`.
    pub fn p(&self, alpha: i64) -> MatOp {
        self.q(self.len() as i64 + 1 - alpha)
    }

    /// Copy with `extra` added to one member of a tower (fault injection).
    pub fn with_added(&self, tower: Tower, alpha: usize, extra: &MatOp) -> Self {
        let mut out = self.clone();
        let ops = match tower {
            Tower::Q => &mut out.q,
            Tower::QBar => &mut out.qbar,
        };
        if let Some(op) = alpha.checked_sub(1).and_then(|i| ops.get_mut(i)) {
            *op = &*op + extra;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tower {
    Q,
    QBar,
}

fn tower(ops: &[MatOp], alpha: i64) -> MatOp {
    if alpha >= 1 && alpha as usize <= ops.len() {
        ops[alpha as usize - 1].clone()
    } else {
        MatOp::zero()
    }
}

pub fn fermionic_gens(params: &AlgebraParams) -> Fermionic {
    let top = params.delta + 1;
    Fermionic {
        q: (1..=top).map(|a| MatOp::lower(DiffOp::x_pow(a - 1))).collect(),
        qbar: (1..=top)
            .map(|a| MatOp::upper(qbar_scalar(params.n as i64, params.delta, a)))
            .collect(),
    }
}

/// `p_α = x^(3-α)` of the Δ = 2 intertwining identities.
pub fn p_scalar(alpha: i64) -> DiffOp {
    if (1..=3).contains(&alpha) {
        DiffOp::x_pow((3 - alpha) as u32)
    } else {
        DiffOp::zero()
    }
}

/// Combination constants of `F_α = Q̄_α + c P_α + D B_α`, where `B` is a
/// bosonic multiplet and `D = diag(d1, d2)` a sign matrix (or absent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixSpec {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c_mix: Rational,
    pub signs: Option<(i8, i8)>,
}

impl MixSpec {
    pub fn new(c_mix: Rational, d1: i8, d2: i8) -> Result<Self> {
        if d1.abs() != 1 || d2.abs() != 1 {
            return Err(Error::InvalidParams(format!(
                "sign matrix entries must be ±1, got ({d1}, {d2})"
            )));
        }
        Ok(MixSpec {
            c_mix,
            signs: Some((d1, d2)),
        })
    }

    /// No bosonic admixture (`D = 0`).
    pub fn fermionic_only(c_mix: Rational) -> Self {
        MixSpec { c_mix, signs: None }
    }

    pub fn d_matrix(&self) -> MatOp {
        match self.signs {
            Some((d1, d2)) => MatOp::diag(
                DiffOp::rational(int(d1 as i64)),
                DiffOp::rational(int(d2 as i64)),
            ),
            None => MatOp::zero(),
        }
    }

    /// All four `diag(±1, ±1)` at the given `c`.
    pub fn all_signs(c_mix: &Rational) -> Vec<MixSpec> {
        [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .into_iter()
            .map(|(a, b)| MixSpec::new(c_mix.clone(), a, b).expect("valid signs"))
            .collect()
    }

    pub fn label(&self) -> String {
        let c = crate::exactnum::fmt_rational(&self.c_mix);
        match self.signs {
            Some((a, b)) => format!("c={c} D=diag({a},{b})"),
            None => format!("c={c} D=0"),
        }
    }
}

impl Default for MixSpec {
    /// `c = -1`, `D = σ3`: the choice for which the triplet anticommutators
    /// close on the identity (see [`crate::verify::search_mix_specs`]).
    fn default() -> Self {
        MixSpec::new(int(-1), 1, -1).expect("valid signs")
    }
}

/// `F_α = Q̄_α + c P_α + D B_α` for a bosonic multiplet `B` of length Δ+1.
pub fn combined_multiplet(ferm: &Fermionic, mix: &MixSpec, bosonic: &[MatOp]) -> Result<Vec<MatOp>> {
    if bosonic.len() != ferm.len() {
        return Err(Error::InvalidParams(format!(
            "bosonic multiplet has {} members, fermionic towers {}",
            bosonic.len(),
            ferm.len()
        )));
    }
    let d = mix.d_matrix();
    Ok(bosonic
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let a = i as i64 + 1;
            let mut f = &ferm.qbar(a) + &ferm.p(a).scale_rat(&mix.c_mix);
            if !d.is_zero() {
                f = &f + &(&d * b);
            }
            f
        })
        .collect())
}

/// `F_α = Q̄_α + c P_α + D T_α`, α = 1, 2, 3 (Δ = 2 only).
pub fn triplet_f(params: &AlgebraParams, mix: &MixSpec) -> Result<[MatOp; 3]> {
    params.require_delta(2)?;
    let f = combined_multiplet(&fermionic_gens(params), mix, &bosonic_gens(params).triplet())?;
    Ok([f[0].clone(), f[1].clone(), f[2].clone()])
}

/// The q(2) generators with `√n` cleared: `F̂_α = F_α / √n`, `h0 = n·1`,
/// `h1 = √n σ3` are returned as `F_α`, `n·1` and `σ3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q2Gens {
    pub f: [MatOp; 3],
    pub t: [MatOp; 3],
    pub h0: MatOp,
    pub sigma3: MatOp,
}

pub fn q2_gens(params: &AlgebraParams, mix: &MixSpec) -> Result<Q2Gens> {
    params.require_delta(2)?;
    if params.n < 1 {
        return Err(Error::InvalidParams("q(2) realization needs n >= 1".into()));
    }
    Ok(Q2Gens {
        f: triplet_f(params, mix)?,
        t: bosonic_gens(params).triplet(),
        h0: MatOp::identity().scale_rat(&int(params.n as i64)),
        sigma3: MatOp::sigma3(),
    })
}

/// Cartan metric of sl(2) in the `(T+, T0, T-)` basis.
pub fn cartan_metric(alpha: usize, beta: usize) -> Rational {
    match (alpha, beta) {
        (1, 3) | (3, 1) => int(1),
        (2, 2) => rat(-1, 2),
        _ => Rational::zero(),
    }
}

/// Overall sign of the invariant form on the triplet. `Standard` is
/// [`cartan_metric`]; `Killing` is its negative, `g_13 = -1, g_22 = ½`,
/// the normalization under which the `F` triplet closes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Standard,
    Killing,
}

impl Metric {
    pub fn g(self, alpha: usize, beta: usize) -> Rational {
        match self {
            Metric::Standard => cartan_metric(alpha, beta),
            Metric::Killing => -cartan_metric(alpha, beta),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "standard" => Ok(Metric::Standard),
            "killing" => Ok(Metric::Killing),
            _ => Err(crate::Error::InvalidParams(format!("unknown metric {s:?}; expected standard or killing"))),
        }
    }
}

/// `((T+)^2, ½{T+,T0}, ⅓(2(T0)^2 + ½{T+,T-}), ½{T0,T-}, (T-)^2)`, a
/// 5-plet under the adjoint action of the `T`'s.
pub fn quintet_s(b: &Bosonic) -> [MatOp; 5] {
    let half = rat(1, 2);
    let (tp, t0, tm) = (&b.t_plus, &b.t_zero, &b.t_minus);
    let middle = &(t0 * t0).scale_rat(&int(2)) + &anticommutator(tp, tm).scale_rat(&half);
    [
        tp * tp,
        anticommutator(tp, t0).scale_rat(&half),
        middle.scale_rat(&rat(1, 3)),
        anticommutator(t0, tm).scale_rat(&half),
        tm * tm,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{commutator, restrict, Doublet};

    fn xpoly(c: &[i64]) -> Vec<ParamPoly> {
        c.iter().map(|&v| k(int(v))).collect()
    }

    #[test]
    fn sl2_action() {
        let g = sl2_gens(2);
        assert!(g.plus.apply(&xpoly(&[0, 0, 1])).is_empty());
        assert_eq!(g.zero.apply(&xpoly(&[1])), xpoly(&[-1]));
        assert_eq!(g.minus.apply(&xpoly(&[0, 0, 0, 1])), xpoly(&[0, 0, 3]));
    }

    #[test]
    fn bosonic_sl2_relation() {
        let b = bosonic_gens(&AlgebraParams::new(5, 2).unwrap());
        assert_eq!(commutator(&b.t_plus, &b.t_minus), b.t_zero.scale_rat(&int(-2)));
        assert!(commutator(&b.j, &b.t_zero).is_zero());
    }

    #[test]
    fn t_zero_is_diagonal_on_monomials() {
        let p = AlgebraParams::new(4, 2).unwrap();
        let r = restrict(&bosonic_gens(&p).t_zero, &p.module());
        assert!(r.preserves());
        let diag: Vec<_> = (0..8).map(|i| r.matrix.get(i, i).constant_value().unwrap()).collect();
        assert_eq!(diag, [-1, 0, 1, -2, -1, 0, 1, 2].map(int));
        assert!((0..8).all(|i| (0..8).all(|j| i == j || r.matrix.get(i, j).is_zero())));
    }

    #[test]
    fn qbar_top_of_tower_is_pure_derivative() {
        let f = fermionic_gens(&AlgebraParams::new(3, 2).unwrap());
        assert_eq!(f.qbar(3), MatOp::upper(DiffOp::d_pow(2)));
        assert!(f.qbar(0).is_zero() && f.qbar(4).is_zero());
    }

    #[test]
    fn qbar_annihilates_top_degree() {
        let q1 = qbar_scalar(4, 2, 1);
        assert!(q1.apply(&xpoly(&[0, 0, 0, 0, 1])).is_empty());
        let f = fermionic_gens(&AlgebraParams::new(4, 2).unwrap());
        assert_eq!(f.qbar(1).apply(&Doublet::from_ints(&[], &[1])), Doublet::from_ints(&[12], &[]));
        assert!(f.qbar(1).apply(&Doublet::from_ints(&[], &[0, 0, 0, 0, 1])).is_zero());
    }

    #[test]
    fn p_reverses_q() {
        let f = fermionic_gens(&AlgebraParams::new(4, 2).unwrap());
        assert_eq!(f.p(1), f.q(3));
        assert_eq!(f.p(3), f.q(1));
        assert_eq!(f.p(1), MatOp::lower(p_scalar(1)));
    }

    #[test]
    fn triplet_needs_delta_two() {
        let p = AlgebraParams::new(4, 3).unwrap();
        assert!(triplet_f(&p, &MixSpec::default()).is_err());
        assert!(q2_gens(&p, &MixSpec::default()).is_err());
    }

    #[test]
    fn quintet_first_member_and_middle_weight() {
        let b = bosonic_gens(&AlgebraParams::new(6, 4).unwrap());
        let s = quintet_s(&b);
        assert_eq!(s[0], &b.t_plus * &b.t_plus);
        assert!(commutator(&b.t_zero, &s[2]).is_zero());
    }

    #[test]
    fn mix_spec_validation() {
        assert!(MixSpec::new(int(-1), 2, 1).is_err());
        assert_eq!(MixSpec::all_signs(&int(-1)).len(), 4);
        assert!(MixSpec::fermionic_only(int(0)).d_matrix().is_zero());
    }

    #[test]
    fn params_validation() {
        assert!(AlgebraParams::new(3, 0).is_err());
        assert!(AlgebraParams::new(1, 3).is_err());
        assert_eq!(AlgebraParams::new(1, 2).unwrap().low(), -1);
    }
}
