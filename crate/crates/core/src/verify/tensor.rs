use num_traits::Zero;
use serde::Serialize;

use super::linear::{bosonic_linear_basis, linear_residual};
use super::{Generators, RelationReport};
use crate::error::Result;
use crate::exactnum::{fmt_rational, int, rat, Rational};
use crate::generators::quintet_s;
use crate::weyl::{anticommutator, commutator, MatOp};

/// sl(2) relations among the `T`'s and the centrality of `J`.
pub fn verify_sl2(g: &Generators) -> Vec<RelationReport> {
    let b = &g.bosonic;
    let mut out = vec![
        RelationReport::compare("4", &commutator(&b.t_plus, &b.t_minus), &b.t_zero.scale_rat(&int(-2)))
            .alpha(1)
            .beta(3),
        RelationReport::compare("4", &commutator(&b.t_plus, &b.t_zero), &-&b.t_plus)
            .alpha(1)
            .beta(2),
        RelationReport::compare("4", &commutator(&b.t_minus, &b.t_zero), &b.t_minus)
            .alpha(3)
            .beta(2),
    ];
    for (a, t) in b.triplet().iter().enumerate() {
        out.push(RelationReport::new("4J", commutator(&b.j, t)).alpha(a as i64 + 1));
    }
    out.into_iter().map(|r| r.params(&g.params)).collect()
}

/// Adjoint action of `T`'s and `J` on the `Q` and `Q̄` towers.
pub fn verify_tensor(g: &Generators) -> Vec<RelationReport> {
    let b = &g.bosonic;
    let f = &g.fermionic;
    let delta = g.params.delta as i64;
    let half_delta = rat(delta, 2);
    let mut out = Vec::new();
    for a in 1..=delta + 1 {
        let q = f.q(a);
        let qb = f.qbar(a);
        let one_minus = int(1 - a);
        let reports = [
            RelationReport::compare("8", &commutator(&b.t_plus, &q), &f.q(a + 1).scale_rat(&int(-(1 - a + delta)))),
            RelationReport::compare("9", &commutator(&b.t_zero, &q), &q.scale_rat(&-(&one_minus + &half_delta))),
            RelationReport::compare("10", &commutator(&b.t_minus, &q), &f.q(a - 1).scale_rat(&-&one_minus)),
            eq11(g, a),
            RelationReport::compare("12", &commutator(&b.t_zero, &qb), &qb.scale_rat(&(&one_minus + &half_delta))),
            RelationReport::compare("13", &commutator(&b.t_minus, &qb), &f.qbar(a + 1).scale_rat(&int(1 - a + delta))),
            RelationReport::compare("14Q", &commutator(&b.j, &q), &q.scale_rat(&-&half_delta)),
            RelationReport::compare("14Qbar", &commutator(&b.j, &qb), &qb.scale_rat(&half_delta)),
        ];
        out.extend(reports.into_iter().map(|r| r.params(&g.params).alpha(a)));
    }
    out
}

/// `coefficient · Q̄_index`; `index` is `None` when the operator is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerForm {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub coefficient: Rational,
    pub index: Option<i64>,
}

impl std::fmt::Display for TowerForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.index {
            None => f.write_str("0"),
            Some(i) => write!(f, "{}·Q̄_{}", fmt_rational(&self.coefficient), i),
        }
    }
}

/// Computes `[T+, Q̄_α]` and finds which multiple of which tower member it
/// is, if any.
pub fn identify_tplus_qbar(g: &Generators, alpha: i64) -> Option<TowerForm> {
    let c = commutator(&g.bosonic.t_plus, &g.fermionic.qbar(alpha));
    if c.is_zero() {
        return Some(TowerForm {
            coefficient: Rational::zero(),
            index: None,
        });
    }
    let top = g.fermionic.len() as i64;
    (1..=top).find_map(|gamma| {
        let member = g.fermionic.qbar(gamma);
        let ((i, j), m) = member.entry(0, 1).terms().next()?;
        let num = c.entry(0, 1).coeff(i, j).constant_value()?;
        let den = m.constant_value()?;
        let k = num / den;
        (member.scale_rat(&k) == c).then_some(TowerForm {
            coefficient: k,
            index: Some(gamma),
        })
    })
}

/// `[T+, Q̄_α] = (1-α) Q̄_{α-1}`. The lowered index is what the adjoint
/// action produces; the identified closed form is attached as a note.
fn eq11(g: &Generators, a: i64) -> RelationReport {
    let lhs = commutator(&g.bosonic.t_plus, &g.fermionic.qbar(a));
    let rhs = g.fermionic.qbar(a - 1).scale_rat(&int(1 - a));
    let found = match identify_tplus_qbar(g, a) {
        Some(form) => form.to_string(),
        None => "not a multiple of a single Q̄".to_string(),
    };
    RelationReport::compare("11", &lhs, &rhs).note(format!("computed [T+,Q̄_{a}] = {found}"))
}

/// Spin-Δ/2 multiplet law `[T+,V_α] = (1-α)V_{α-1}`,
/// `[T0,V_α] = (1-α+Δ/2)V_α`, `[T-,V_α] = (1-α+Δ)V_{α+1}`; for Δ = 2 this
/// is the triplet law.
fn multiplet_law(tag: &str, g: &Generators, members: &[MatOp]) -> Vec<RelationReport> {
    let delta = members.len() as i64 - 1;
    let v = |a: i64| {
        if a >= 1 && a as usize <= members.len() {
            members[a as usize - 1].clone()
        } else {
            MatOp::zero()
        }
    };
    let t = g.bosonic.triplet();
    let mut out = Vec::new();
    for a in 1..=delta + 1 {
        let expected = [
            v(a - 1).scale_rat(&int(1 - a)),
            v(a).scale_rat(&(int(1 - a) + rat(delta, 2))),
            v(a + 1).scale_rat(&int(1 - a + delta)),
        ];
        for (beta, (tb, rhs)) in t.iter().zip(&expected).enumerate() {
            out.push(
                RelationReport::compare(tag, &commutator(tb, &v(a)), rhs)
                    .params(&g.params)
                    .alpha(a)
                    .beta(beta as i64 + 1),
            );
        }
    }
    out
}

/// At Δ = 2, `T_α`, `P_α` and `Q̄_α` are triplets, and so is `F_α` for any
/// mix (tags `15T`, `15P`, `15Qbar`).
pub fn verify_triplet_law(g: &Generators) -> Result<Vec<RelationReport>> {
    let f = &g.fermionic;
    let mut out = multiplet_law("15T", g, &g.bosonic.triplet());
    out.extend(multiplet_law("15P", g, &(1..=3).map(|a| f.p(a)).collect::<Vec<_>>()));
    out.extend(multiplet_law("15Qbar", g, &(1..=3).map(|a| f.qbar(a)).collect::<Vec<_>>()));
    Ok(out)
}

/// At Δ = 4 the quintet `S_α` transforms like `Q̄_α` (tag `34`).
pub fn verify_quintet_law(g: &Generators) -> Vec<RelationReport> {
    multiplet_law("34", g, &quintet_s(&g.bosonic))
}

/// Δ = 1: every `{Q_α, Q̄_β}` is linear in the bosonic generators
/// (per-block span of `1, j+, j0, j-`).
pub fn verify_osp22(g: &Generators) -> Result<Vec<RelationReport>> {
    let basis = bosonic_linear_basis(&g.params);
    let top = g.fermionic.len() as i64;
    let mut out = Vec::new();
    for a in 1..=top {
        for b in 1..=top {
            let ac = anticommutator(&g.fermionic.q(a), &g.fermionic.qbar(b));
            out.push(
                RelationReport::new("OSP22", linear_residual(&ac, &basis)?)
                    .params(&g.params)
                    .alpha(a)
                    .beta(b),
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::AlgebraParams;
    use crate::verify::Fault;

    fn gens(n: u32, d: u32) -> Generators {
        Generators::new(AlgebraParams::new(n, d).unwrap())
    }

    #[test]
    fn sl2_holds() {
        for (n, d) in [(2, 1), (9, 3)] {
            assert!(verify_sl2(&gens(n, d)).iter().all(RelationReport::holds));
        }
    }

    #[test]
    fn sl2_detects_mutated_t_plus() {
        let r = verify_sl2(&gens(5, 2).with_fault(Fault::TPlus));
        let bad = r.iter().find(|r| r.alpha == Some(1) && r.beta == Some(3)).unwrap();
        assert!(!bad.holds());
        assert!(!bad.residual.is_zero());
    }

    #[test]
    fn tensor_examples() {
        let g = gens(6, 2);
        let r = verify_tensor(&g);
        assert!(r.iter().all(RelationReport::holds), "{:?}", r.iter().filter(|r| !r.holds()).map(|r| r.line()).collect::<Vec<_>>());
        // [T+, Q1] = -2 Q2 explicitly
        let c = commutator(&g.bosonic.t_plus, &g.fermionic.q(1));
        assert_eq!(c, g.fermionic.q(2).scale_rat(&int(-2)));
        // [J, Q̄2] = +Q̄2
        assert_eq!(commutator(&g.bosonic.j, &g.fermionic.qbar(2)), g.fermionic.qbar(2));
    }

    #[test]
    fn t_zero_on_middle_q_vanishes_at_delta_two() {
        let g = gens(4, 2);
        assert!(commutator(&g.bosonic.t_zero, &g.fermionic.q(2)).is_zero());
    }

    #[test]
    fn eq11_lowers_the_index() {
        for d in 1..=4 {
            let g = gens(7, d);
            assert_eq!(identify_tplus_qbar(&g, 1).unwrap().index, None);
            for a in 2..=d as i64 + 1 {
                let form = identify_tplus_qbar(&g, a).unwrap();
                assert_eq!(form.index, Some(a - 1));
                assert_eq!(form.coefficient, int(1 - a));
            }
        }
    }

    #[test]
    fn osp22_closes_linearly() {
        let r = verify_osp22(&gens(5, 1)).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(RelationReport::holds));
    }

    #[test]
    fn osp_check_rejects_quadratic_anticommutators() {
        // at Δ = 2 {Q1, Q̄1} contains (D-n+1)(D-n): not linear
        let g = gens(5, 2);
        let basis = bosonic_linear_basis(&g.params);
        let ac = anticommutator(&g.fermionic.q(1), &g.fermionic.qbar(1));
        assert!(!linear_residual(&ac, &basis).unwrap().is_zero());
    }

    #[test]
    fn quintet_transforms_like_qbar() {
        assert!(verify_quintet_law(&gens(6, 4)).iter().all(RelationReport::holds));
    }
}
