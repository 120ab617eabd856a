mod common;

use beamsym::optimal::DEFAULT_TOL;
use beamsym::{
    adjoint_composed, bracket, classify, killing_form, representative, structure_constants,
    transform_point, verify_conjugacy, AlgebraElement, CaseParams, EpsilonVector, Family,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Equal),
        Just(Family::Greater),
        Just(Family::Less)
    ]
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    prop::array::uniform8(-3.0f64..3.0).prop_map(AlgebraElement)
}

fn eps() -> impl Strategy<Value = EpsilonVector> {
    prop::array::uniform8(-1.5f64..1.5).prop_map(EpsilonVector)
}

fn close(a: &AlgebraElement, b: &AlgebraElement, tol: f64) -> bool {
    (0..8).all(|i| (a.0[i] - b.0[i]).abs() <= tol * (1.0 + b.0[i].abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(f in family(), x in element(), y in element(), z in element()) {
        let sc = structure_constants(&common::params(f));
        let xy = bracket(&x, &y, &sc);
        prop_assert!(close(&(xy + bracket(&y, &x, &sc)), &AlgebraElement::zero(), 1e-12));
        let j = bracket(&x, &bracket(&y, &z, &sc), &sc)
            + bracket(&y, &bracket(&z, &x, &sc), &sc)
            + bracket(&z, &bracket(&x, &y, &sc), &sc);
        prop_assert!(j.norm_inf() < 1e-10);
    }

    #[test]
    fn adjoint_is_an_automorphism(f in family(), e in eps(), x in element(), y in element()) {
        let p = common::params(f);
        let sc = structure_constants(&p);
        let a = adjoint_composed(&e, &p);
        let lhs = bracket(&a.apply(&x), &a.apply(&y), &sc);
        let rhs = a.apply(&bracket(&x, &y, &sc));
        prop_assert!(close(&lhs, &rhs, 1e-9), "{:?} vs {:?}", lhs, rhs);
        let k0 = killing_form(&x, &y, &sc);
        let k1 = killing_form(&a.apply(&x), &a.apply(&y), &sc);
        prop_assert!((k1 - k0).abs() <= 1e-8 * k0.abs().max(1.0));
    }

    #[test]
    fn classification_is_conjugate_and_scale_free(f in family(), x in element(), s in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
        prop_assume!(x.norm_inf() > 0.1);
        let p = common::params(f);
        let r = classify(&x, &p, DEFAULT_TOL).unwrap();
        prop_assert!(verify_conjugacy(&x, &r, &p).pass);
        let rs = classify(&(x * s), &p, DEFAULT_TOL).unwrap();
        prop_assert_eq!(rs.class_id, r.class_id);
        prop_assert!(rs.free_params.max_dev(&r.free_params) < 1e-8);
        let rep = representative(r.class_id, &r.free_params, 0.0).unwrap();
        let again = classify(&rep, &p, DEFAULT_TOL).unwrap();
        prop_assert_eq!(again.class_id, r.class_id);
        prop_assert!(again.free_params.max_dev(&r.free_params) < 1e-8);
    }

    #[test]
    fn one_parameter_groups_compose_additively(
        f in family(), i in 1usize..=8, a in -1.0f64..1.0, b in -1.0f64..1.0,
        pt in prop::array::uniform4(-2.0f64..2.0),
    ) {
        let p = common::params(f);
        let ab = transform_point(i, b, &transform_point(i, a, &pt, &p).unwrap(), &p).unwrap();
        let direct = transform_point(i, a + b, &pt, &p).unwrap();
        for c in 0..4 {
            prop_assert!((ab[c] - direct[c]).abs() < 1e-12 * (1.0 + direct[c].abs()));
        }
    }

    #[test]
    fn damping_fixes_the_family(rho2 in 0.2f64..3.0, k in 0.2f64..3.0, d in 0.01f64..6.0) {
        let p = CaseParams::from_damping(1.0, rho2, k, d, 1.0).unwrap();
        let disc = d * d - 4.0 * k * rho2;
        let want = if disc.abs() <= 1e-9 * d * d { Family::Equal } else if disc > 0.0 { Family::Greater } else { Family::Less };
        prop_assert_eq!(p.family(), want);
    }
}
