use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qkz_core::combinat::{
    omega, parse_descriptor, reduce_step, valid_choices, Choice, Descriptor, GammaWedge,
};
use qkz_core::construct::{basis_indices, family, BasisIndex, Kind};
use qkz_core::nullres::{coordinates, coordinates_cramer, det_identity_check, DetMode, DetReport};
use qkz_core::poly::MPoly;
use qkz_core::qchar::{qbinom, qbinom_rec1, qbinom_rec2, qtetra, Base, QPoly, QSeries};
use qkz_core::wedge::WedgeElement;

fn degree_one(vars: usize, coeffs: &[i64]) -> WedgeElement {
    let f = family(vars);
    let mut w = WedgeElement::zero(vars, 1, f.space());
    for (i, &c) in coeffs.iter().enumerate().take(vars) {
        let t = WedgeElement::basis1(vars, f.space(), i as u16, MPoly::one(f.space())).unwrap();
        w = w.add(&t.scale_int(&BigInt::from(c))).unwrap();
    }
    w
}

fn gamma_one(n: usize, coeffs: &[i64]) -> GammaWedge {
    let mut g = GammaWedge::zero(n, 1);
    for (s, &c) in coeffs.iter().enumerate().take(2 * n) {
        g.add_term(&[s as u16], BigRational::from_integer(c.into()));
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn qbinom_symmetric(m in 0i64..=30, r in 0i64..=30) {
        prop_assume!(r <= m);
        prop_assert_eq!(qbinom(m, r, Base::Q), qbinom(m, m - r, Base::Q));
        prop_assert_eq!(qbinom_rec1(m, r, Base::Q), qbinom_rec2(m, r, Base::Q));
        prop_assert_eq!(qbinom(m, r, Base::Q).eval_one(), BigInt::from(qkz_core::construct::binomial(m, r)));
    }

    #[test]
    fn qtetra_symmetric(n in 0i64..=9, a in 0i64..=9, b in 0i64..=9, c in 0i64..=9) {
        let t = qtetra(n, a, b, c);
        prop_assert_eq!(&t, &qtetra(n, b, a, c));
        prop_assert_eq!(&t, &qtetra(n, c, b, a));
        let d = n - a - b - c;
        if d >= 0 {
            prop_assert_eq!(&t, &qtetra(n, d, b, c));
        }
    }

    #[test]
    fn qtetra_pivot(n in 0i64..=9, l1 in 0i64..=9, l2 in 0i64..=9, l3 in 0i64..=9) {
        let lhs = QPoly::bracket(l3 as usize, 2).mul(&qtetra(n, l1, l2, l3));
        let rhs = QPoly::bracket(l1 as usize + 1, 2).mul(&qtetra(n, l1 + 1, l2, l3 - 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_antisymmetric(vars in 2usize..=6, a in prop::collection::vec(-5i64..=5, 6), b in prop::collection::vec(-5i64..=5, 6)) {
        let x = degree_one(vars, &a);
        let y = degree_one(vars, &b);
        prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().neg());
        prop_assert!(x.wedge(&x).unwrap().is_zero());
    }

    #[test]
    fn gamma_antisymmetric(n in 1usize..=3, a in prop::collection::vec(-5i64..=5, 6), b in prop::collection::vec(-5i64..=5, 6), k in 1i64..=3) {
        let x = gamma_one(n, &a);
        let y = gamma_one(n, &b);
        let minus = BigRational::from_integer((-1).into());
        prop_assert_eq!(x.wedge(&y), y.wedge(&x).scale(&minus));
        prop_assert!(x.wedge(&x).is_zero());
        // even forms commute
        let w = omega(n, k);
        prop_assert_eq!(w.wedge(&x), x.wedge(&w));
    }

    #[test]
    fn series_json_round_trip(offset in -20i64..20, den in 1i64..5, coeffs in prop::collection::vec(-1_000_000_000_000i64..1_000_000_000_000, 0..12)) {
        let s = QSeries {
            offset: BigRational::new(offset.into(), den.into()),
            cutoff: coeffs.len(),
            coeffs: coeffs.iter().map(|&c| BigInt::from(c) * BigInt::from(c)).collect(),
        };
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<QSeries>(&text).unwrap(), s);
    }

    #[test]
    fn gamma_json_round_trip(n in 1usize..=3, a in prop::collection::vec(-5i64..=5, 6), k in 1i64..=3) {
        let g = gamma_one(n, &a).wedge(&omega(n, k));
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<GammaWedge>(&text).unwrap(), g);
    }

    #[test]
    fn reduce_steps_never_raise_h(n in 3usize..=5, l1 in 2usize..=4, pick in 0usize..1000, which in 0usize..1000) {
        prop_assume!(l1 <= n);
        let all = qkz_core::combinat::descriptors(n, l1);
        let d = &all[pick % all.len()];
        let choices = valid_choices(d);
        prop_assume!(!choices.is_empty());
        let c = &choices[which % choices.len()];
        let s = reduce_step(d, c).unwrap();
        prop_assert!(s.h_after <= s.h_before);
        if let Some(img) = &s.image {
            prop_assert!(img.validate().is_ok());
            prop_assert_eq!(&img.r, &c.p);
        }
    }

    #[test]
    fn coordinates_invert_combinations(coeffs in prop::collection::vec(-4i64..=4, 6)) {
        let f = family(4);
        let basis = f.enumerate_basis(2).unwrap();
        let mut p = WedgeElement::zero(4, 2, f.space());
        for ((_, b), &c) in basis.iter().zip(&coeffs) {
            p = p.add(&b.scale_int(&BigInt::from(c))).unwrap();
        }
        prop_assume!(!p.is_zero());
        let co = coordinates(&p).unwrap();
        for (n, &c) in co.numerators.iter().zip(&coeffs) {
            let want = MPoly::constant(f.space(), BigInt::from(c) * &co.denominator);
            prop_assert_eq!(n, &want);
        }
    }
}

#[test]
fn wedge_and_report_json_round_trip() {
    for vars in 2..=5 {
        let f = family(vars);
        for kind in [Kind::V, Kind::W, Kind::Xi] {
            let g = f.generator(kind, 1).unwrap();
            let text = serde_json::to_string(&*g).unwrap();
            assert_eq!(serde_json::from_str::<WedgeElement>(&text).unwrap(), *g);
        }
    }
    let r = det_identity_check(4, 2, DetMode::Randomized, 8, 3).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<DetReport>(&text).unwrap(), r);
    for b in basis_indices(5, 3) {
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<BasisIndex>(&text).unwrap(), b);
    }
    let d = parse_descriptor(5, "(1,3,5|3,4)").unwrap();
    let text = serde_json::to_string(&d).unwrap();
    assert_eq!(serde_json::from_str::<Descriptor>(&text).unwrap(), d);
    let c = Choice { p: vec![0, 2], sigma: vec![1, 0] };
    assert_eq!(serde_json::from_str::<Choice>(&serde_json::to_string(&c).unwrap()).unwrap(), c);
}

#[test]
fn coordinate_routes_agree() {
    for vars in [2usize, 3, 4, 5] {
        let f = family(vars);
        let mut elems = vec![(*f.generator(Kind::Xi, 1).unwrap()).clone(), (*f.generator(Kind::Xi2, 0).unwrap()).clone()];
        elems.push(f.generator(Kind::W, 1).unwrap().wedge(&f.generator(Kind::V, 1).unwrap()).unwrap());
        for p in elems {
            let a = coordinates(&p).unwrap();
            let b = coordinates_cramer(&p).unwrap();
            assert_eq!(a.recombine(vars).unwrap(), p.scale_int(&a.denominator));
            assert_eq!(b.recombine(vars).unwrap(), p.scale_int(&b.denominator));
            for ((x, y), _) in a.numerators.iter().zip(&b.numerators).zip(&a.rows) {
                assert_eq!(x.clone() * MPoly::constant(f.space(), b.denominator.clone()), y.clone() * MPoly::constant(f.space(), a.denominator.clone()));
            }
        }
    }
}

#[test]
fn xi2_coordinates_are_a_unit_vector() {
    let f = family(4);
    let c = coordinates(&f.generator(Kind::Xi2, 0).unwrap()).unwrap();
    let nonzero: Vec<_> = c.rows.iter().zip(&c.numerators).filter(|(_, s)| !s.is_zero()).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].0, &BasisIndex::new(&[], &[], &[1]));
}

#[test]
fn determinant_modes_agree() {
    for (vars, ell) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2)] {
        let s = det_identity_check(vars, ell, DetMode::Symbolic, 8, 0).unwrap();
        let r = det_identity_check(vars, ell, DetMode::Randomized, 8, 11).unwrap();
        assert!(s.matches && r.matches, "{vars} {ell}");
        assert_eq!(s.c, r.c, "{vars} {ell}");
    }
    for (vars, ell) in [(6, 3), (5, 1), (5, 3), (7, 1)] {
        let r = det_identity_check(vars, ell, DetMode::Randomized, 8, 5).unwrap();
        assert!(r.matches && r.degree_ok, "{vars} {ell}");
    }
}
