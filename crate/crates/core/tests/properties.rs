use std::f64::consts::TAU;

use dwbc_core::functional::{functional_residual, FunctionalInput};
use dwbc_core::monodromy::{build_monodromy, check_dense_vs_matrix_free, OPERATOR_REL_TOL};
use dwbc_core::partition::{z_algebraic, z_enumerate, EnumerationMode};
use dwbc_core::scalar::rational;
use dwbc_core::vertex::{build_l, check_yang_baxter, weights_of, Weights};
use dwbc_core::{Complex64, LaurentPoly, Monomial, RationalFunction, Scalar, Spectral, UniPoly, VarId};
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    let term = ((-2i32..=2, -2i32..=2, -2i32..=2), -6i64..=6, 1i64..=4);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|((a, b, c), n, d)| {
            (
                Monomial::from_pairs([(VarId::u(1), a), (VarId::w(1), b), (VarId::Q, c)]),
                rational(n, d),
            )
        }))
    })
}

fn q_poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-5i64..=5, 1..5).prop_map(|c| UniPoly::from_i64(&c))
}

fn nonzero_q_poly() -> impl Strategy<Value = UniPoly> {
    q_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn spectral() -> impl Strategy<Value = Spectral<Complex64>> {
    (0.5f64.ln()..2f64.ln(), 0.0..TAU).prop_map(|(re, im)| Spectral::from_log(Complex64::new(re, im)))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (a.norm() + b.norm()).max(1e-300)
}

fn eval_at(p: &LaurentPoly, point: [Complex64; 3]) -> Complex64 {
    p.eval(|v| match v {
        v if v == VarId::u(1) => Some(point[0]),
        v if v == VarId::w(1) => Some(point[1]),
        v if v == VarId::Q => Some(point[2]),
        _ => None,
    })
    .unwrap()
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn canonical_form_is_idempotent(a in small_poly()) {
        let again = LaurentPoly::from_terms(a.terms().iter().cloned());
        prop_assert_eq!(&again, &a);
        let parsed: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in small_poly(),
        b in small_poly(),
        x in spectral(),
        y in spectral(),
        z in spectral(),
    ) {
        let pt = [*x.exp(), *y.exp(), *z.exp()];
        let (ea, eb) = (eval_at(&a, pt), eval_at(&b, pt));
        prop_assert!(close(eval_at(&(&a * &b), pt), ea * eb, 1e-12));
        // |u|, |w|, |q| ≤ 2 and exponents ≤ 2 bound each monomial by 2^6.
        let scale = 64.0 * (Scalar::magnitude(&a) + Scalar::magnitude(&b));
        let sum = eval_at(&(&a + &b), pt);
        prop_assert!((sum - (ea + eb)).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn rational_function_equality_is_an_equivalence(
        n in q_poly(),
        d in nonzero_q_poly(),
        k1 in nonzero_q_poly(),
        k2 in nonzero_q_poly(),
    ) {
        let f = RationalFunction::new(n.clone(), d.clone()).unwrap();
        let g = RationalFunction::new(n.mul(&k1), d.mul(&k1)).unwrap();
        let h = RationalFunction::new(n.mul(&k2), d.mul(&k2)).unwrap();
        prop_assert!(f.cross_eq(&f));
        prop_assert_eq!(f.cross_eq(&g), g.cross_eq(&f));
        prop_assert!(f.cross_eq(&g) && g.cross_eq(&h) && f.cross_eq(&h));
        prop_assert_eq!(f.sub(&g), RationalFunction::zero());
    }

    #[test]
    fn gcd_divides_both(a in nonzero_q_poly(), b in nonzero_q_poly(), c in nonzero_q_poly()) {
        let (x, y) = (a.mul(&c), b.mul(&c));
        let g = x.gcd(&y);
        prop_assert!(x.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(y.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(g.div_rem(&c.monic()).unwrap().1.is_zero());
    }

    #[test]
    fn delta_identity_for_monomial_arguments(e in -3i32..=3, k in 1i64..=5) {
        let z = Spectral::from_exp(LaurentPoly::term(Monomial::var(VarId::u(1), e), rational(k, 1))).unwrap();
        let w = weights_of(&z, &Spectral::q());
        prop_assert!(w.delta_defect(&Spectral::q()).is_zero());
    }

    #[test]
    fn l_matrix_obeys_ice_rule(z in spectral(), q in spectral()) {
        let l = build_l(&z, &q);
        for r in 0..4usize {
            for c in 0..4usize {
                let charge = |i: usize| (i >> 1) + (i & 1);
                if charge(r) != charge(c) {
                    prop_assert_eq!(*l.matrix().get(r, c), Complex64::new(0.0, 0.0));
                }
            }
        }
        let w: Weights<Complex64> = weights_of(&z, &q);
        prop_assert_eq!(w.entry(0, 0, 0, 0), w.entry(1, 1, 1, 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn yang_baxter_holds_numerically(l in spectral(), m in spectral(), n in spectral(), q in spectral()) {
        prop_assert!(check_yang_baxter(&l, &m, &n, &q).passes(OPERATOR_REL_TOL));
    }

    #[test]
    fn dense_and_matrix_free_blocks_agree(
        u in spectral(),
        mus in prop::collection::vec(spectral(), 1..=5),
        q in spectral(),
    ) {
        let m = build_monodromy(&u, &mus, &q);
        prop_assert!(check_dense_vs_matrix_free(&m).unwrap().passes(1e-12));
    }

    #[test]
    fn partition_function_is_symmetric(
        points in prop::collection::vec((spectral(), spectral()), 1..=4),
        q in spectral(),
        seed in any::<u64>(),
    ) {
        let (lambdas, mus): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        let base = z_algebraic(&lambdas, &mus, &q).unwrap();
        let mut perm: Vec<usize> = (0..lambdas.len()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let pl: Vec<_> = perm.iter().map(|&i| lambdas[i].clone()).collect();
        let pm: Vec<_> = perm.iter().rev().map(|&i| mus[i].clone()).collect();
        prop_assert!(close(z_algebraic(&pl, &mus, &q).unwrap(), base, 1e-9));
        prop_assert!(close(z_enumerate(&lambdas, &pm, &q, EnumerationMode::Pruned).unwrap(), base, 1e-9));
    }

    #[test]
    fn functional_equation_scales_with_z(
        lambda0 in spectral(),
        lambdas in prop::collection::vec(spectral(), 3),
        mus in prop::collection::vec(spectral(), 2),
        q in spectral(),
        omega in spectral(),
    ) {
        let input = FunctionalInput::new(lambda0, lambdas, mus.clone(), q.clone());
        prop_assume!(input.check_poles().is_ok());
        let z = |_: &[usize], pts: &[Spectral<Complex64>]| z_algebraic(pts, &mus, &q);
        let plain = functional_residual(&input, z).unwrap();
        let w = *omega.exp();
        let scaled = functional_residual(&input, |l: &[usize], p: &[Spectral<Complex64>]| Ok(z(l, p)? * w)).unwrap();
        prop_assert!(plain.residual().passes(1e-9));
        prop_assert!(scaled.residual().passes(1e-9));
    }
}

#[test]
fn exact_functional_residual_scales_by_omega() {
    let input = FunctionalInput::symbolic(2, 1);
    let omega = LaurentPoly::term(Monomial::var(VarId::Q, 3), rational(7, 2));
    let fake = |_: &[usize], pts: &[Spectral<LaurentPoly>]| Ok(pts[0].exp().clone());
    let base = functional_residual(&input, fake).unwrap();
    let scaled = functional_residual(&input, |l: &[usize], p: &[Spectral<LaurentPoly>]| {
        Ok(&fake(l, p)? * &omega)
    })
    .unwrap();
    assert!(!base.value.is_zero());
    assert_eq!(scaled.value, &base.value * &omega);
}
