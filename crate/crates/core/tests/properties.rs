use proptest::prelude::*;

use qes_core::exactnum::{
    char_poly, count_all_real, int, rat, sturm_count, ExactMatrix, ParamPoly, Rational, Var,
};
use qes_core::generators::{bosonic_gens, fermionic_gens, AlgebraParams};
use qes_core::spectral::{algebraic_spectrum, gauged, restricted_symbolic, HamiltonianSpec};
use qes_core::weyl::{restrict, DiffOp, Doublet, MatOp, ModuleSpec};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(p, q)| rat(p, q))
}

fn poly(var: Var) -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec(small_rat(), 0..5).prop_map(move |c| ParamPoly::from_coeffs(var, c))
}

fn diffop() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 0..4).prop_map(|terms| {
        terms.into_iter().fold(DiffOp::zero(), |acc, (i, j, c)| {
            &acc + &DiffOp::term(i, j, ParamPoly::constant(Var::K0, int(c)))
        })
    })
}

fn matop() -> impl Strategy<Value = MatOp> {
    (diffop(), diffop(), diffop(), diffop()).prop_map(|(a, b, c, d)| MatOp::new([[a, b], [c, d]]))
}

fn x_poly() -> impl Strategy<Value = Vec<ParamPoly>> {
    prop::collection::vec(small_rat(), 0..5)
        .prop_map(|c| c.into_iter().map(|v| ParamPoly::constant(Var::K0, v)).collect())
}

fn same(a: &[ParamPoly], b: &[ParamPoly]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| {
        let zero = ParamPoly::zero(Var::K0);
        a.get(i).unwrap_or(&zero) == b.get(i).unwrap_or(&zero)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in poly(Var::X), b in poly(Var::X), c in poly(Var::X)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_reconstructs(a in poly(Var::X), b in poly(Var::X)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree().unwrap_or(0) < b.degree().unwrap().max(1) || r.is_zero());
    }

    #[test]
    fn char_poly_matches_determinant(
        entries in prop::collection::vec(small_rat(), 9),
        lambda in small_rat(),
    ) {
        let m = ExactMatrix::from_rationals(3, 3, &entries).unwrap();
        let p = char_poly(&m).unwrap().at(&int(0));
        let mut shifted = entries.iter().map(|e| -e.clone()).collect::<Vec<_>>();
        for i in 0..3 {
            shifted[4 * i] += &lambda;
        }
        let det = ExactMatrix::from_rationals(3, 3, &shifted).unwrap().determinant().unwrap();
        prop_assert_eq!(p.eval(&lambda), det.constant_value().unwrap());
    }

    #[test]
    fn sturm_counts_distinct_roots(roots in prop::collection::vec(-6i64..=6, 1..6)) {
        let p = roots.iter().fold(ParamPoly::one(Var::X), |acc, r| {
            &acc * &ParamPoly::from_ints(Var::X, &[-r, 1])
        });
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(count_all_real(&p).unwrap(), distinct.len());
        prop_assert_eq!(p.square_free_part().unwrap().degree(), Some(distinct.len()));
        let inside = distinct.iter().filter(|r| **r > -2 && **r <= 3).count();
        prop_assert_eq!(sturm_count(&p, &int(-2), &int(3)).unwrap(), inside);
    }

    #[test]
    fn weyl_composition_associates(a in diffop(), b in diffop(), c in diffop()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn weyl_action_is_a_homomorphism(a in diffop(), b in diffop(), p in x_poly()) {
        let lhs = (&a * &b).apply(&p);
        let rhs = a.apply(&b.apply(&p));
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn matop_composition_associates(a in matop(), b in matop(), c in matop()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn matop_action_is_a_homomorphism(a in matop(), b in matop(), top in x_poly(), bottom in x_poly()) {
        let v = Doublet::new(top, bottom);
        let lhs = (&a * &b).apply(&v);
        let rhs = a.apply(&b.apply(&v));
        prop_assert!(same(lhs.component(0), rhs.component(0)));
        prop_assert!(same(lhs.component(1), rhs.component(1)));
    }

    #[test]
    fn restriction_is_multiplicative(n in 2u32..7, delta in 1u32..3, picks in prop::collection::vec(0usize..6, 2)) {
        prop_assume!(n >= delta);
        let p = AlgebraParams::new(n, delta).unwrap();
        let b = bosonic_gens(&p);
        let f = fermionic_gens(&p);
        let pool = [b.t_plus, b.t_zero, b.t_minus, b.j, f.q(1), f.qbar(1)];
        let (x, y) = (&pool[picks[0]], &pool[picks[1]]);
        let spec = p.module();
        let rx = restrict(x, &spec).into_preserved().unwrap();
        let ry = restrict(y, &spec).into_preserved().unwrap();
        let rxy = restrict(&(x * y), &spec).into_preserved().unwrap();
        prop_assert_eq!(rxy, rx.try_mul(&ry).unwrap());
    }

    #[test]
    fn gauged_hamiltonian_preserves_module(n in 2u32..9, k0 in small_rat()) {
        let spec = HamiltonianSpec::new(n, k0).unwrap();
        let module = ModuleSpec::new(n as i64, n as i64 - 2).unwrap();
        prop_assert!(restrict(&gauged(&spec), &module).preserves());
    }

    #[test]
    fn spectrum_is_real_and_symmetric(n in 2u32..5, k0 in small_rat()) {
        let m = restricted_symbolic(n).unwrap();
        let cp = char_poly(&m).unwrap();
        prop_assert!(cp.is_even());
        let p = cp.at(&k0);
        // all 2n roots real: distinct real roots equal the square-free degree
        prop_assert_eq!(count_all_real(&p).unwrap(), p.square_free_part().unwrap().degree().unwrap());
        let s = algebraic_spectrum(&HamiltonianSpec::new(n, k0).unwrap()).unwrap();
        let e = s.energies();
        prop_assert_eq!(e.len(), 2 * n as usize);
        for (a, b) in e.iter().zip(e.iter().rev()) {
            prop_assert!((a + b).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn eigenvectors_satisfy_the_eigen_equation(n in 2u32..5, k0 in small_rat()) {
        let spec = HamiltonianSpec::new(n, k0).unwrap();
        let m = restricted_symbolic(n).unwrap().eval_param(&spec.k0);
        let a = m.to_f64().unwrap();
        let dim = m.rows();
        let h = gauged(&spec);
        for level in algebraic_spectrum(&spec).unwrap().levels {
            for v in &level.vectors {
                if let (Some((top, bottom)), Some(e)) = (&v.exact, &level.exact) {
                    let d = Doublet::from_rationals(top, bottom);
                    let image = h.apply(&d);
                    let scaled = Doublet::from_rationals(
                        &top.iter().map(|c| c * e).collect::<Vec<_>>(),
                        &bottom.iter().map(|c| c * e).collect::<Vec<_>>(),
                    );
                    prop_assert!(same(image.component(0), scaled.component(0)));
                    prop_assert!(same(image.component(1), scaled.component(1)));
                } else {
                    let x: Vec<f64> = v.top.iter().chain(&v.bottom).copied().collect();
                    let norm = x.iter().fold(0.0f64, |s, c| s.max(c.abs()));
                    let scale = a.iter().fold(1.0f64, |s, c| s.max(c.abs()));
                    for i in 0..dim {
                        let mv: f64 = (0..dim).map(|j| a[i * dim + j] * x[j]).sum();
                        prop_assert!((mv - level.energy * x[i]).abs() <= 1e-10 * scale * norm, "row {i}");
                    }
                }
            }
        }
    }
}
