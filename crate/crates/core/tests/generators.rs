use num_bigint::BigInt;
use qkz_core::construct::{basis_indices, binomial, family, Kind};
use qkz_core::nullres::{det_identity_symbolic, in_u, p_block, residue_components};
use qkz_core::poly::{bar, bar_direct, delta_plus, delta_plus_e, elementary, to_e_rep, to_x_rep, MPoly, Space, Symbol};
use qkz_core::linalg::bareiss_det;

#[test]
fn bar_of_e2_in_four_variables() {
    let e = Space::e(4);
    let e2 = MPoly::symbol(&e, &Symbol::E(2));
    let t = Space::bar_target(4);
    let want = MPoly::symbol(&t, &Symbol::E(2)) - MPoly::symbol(&t, &Symbol::Bar).pow(2);
    assert_eq!(bar(&e2).unwrap(), want);
    let direct = bar_direct(&elementary(4, 2)).unwrap();
    assert_eq!(to_x_rep(&bar(&e2).unwrap(), 2).unwrap(), direct);
}

#[test]
fn delta_plus_value() {
    let d = delta_plus(4);
    let pt: Vec<BigInt> = (1..=4).map(BigInt::from).collect();
    assert_eq!(d.eval_int(&pt).unwrap(), BigInt::from(12600));
    let de = delta_plus_e(4);
    assert_eq!(to_e_rep(&d).unwrap(), de);
}

#[test]
fn p_examples() {
    let f = family(4);
    let e = |k| f.e(k);
    assert_eq!(f.p(2, 1).unwrap(), e(3) - e(1) * e(2));
    assert_eq!(f.p(2, 2).unwrap(), -(e(1) * e(4)));
}

#[test]
fn xi_routes_agree() {
    for vars in [2usize, 4, 6] {
        let f = family(vars);
        for k in 1..=f.half() {
            let xi = f.generator(Kind::Xi, k).unwrap();
            assert_eq!(*xi, f.xi_from_product_formula(k).unwrap(), "product {vars} {k}");
            assert_eq!(*xi, f.xi_from_coeffs(k).unwrap(), "coeffs {vars} {k}");
            assert_eq!(*xi, f.xi_from_v_expansion(k).unwrap(), "v {vars} {k}");
            assert_eq!(*xi, f.xi_from_w_expansion(k).unwrap(), "w {vars} {k}");
            for i in 0..f.half() {
                for j in 0..f.half() {
                    assert_eq!(f.xi_expansion_coeff(k, i, j).unwrap(), f.xi_expansion_coeff_sums(k, i, j).unwrap());
                }
            }
        }
    }
}

#[test]
fn big_xi_relations() {
    for vars in [2usize, 3, 4, 5, 6, 7] {
        let f = family(vars);
        let xi1 = f.generator(Kind::Xi, 1).unwrap();
        let x2 = f.generator(Kind::Xi2, 0).unwrap();
        assert_eq!(*x2, xi1.scale_int(&BigInt::from(2)), "Xi2 vars={vars}");
        let x1 = f.generator(Kind::Xi1, 0).unwrap();
        let other = if vars % 2 == 0 { f.generator(Kind::W, 1) } else { f.generator(Kind::V0, 0) }.unwrap();
        assert_eq!(*x1, *other, "Xi1 vars={vars}");
    }
}

#[test]
fn generators_lie_in_u() {
    for vars in 2..=7usize {
        let f = family(vars);
        let n = f.half();
        let odd = vars % 2 == 1;
        for i in 1..=n {
            assert!(in_u(&f.generator(Kind::V, i).unwrap()).unwrap(), "v{i} vars={vars}");
            assert!(in_u(&f.generator(Kind::W, i).unwrap()).unwrap(), "w{i} vars={vars}");
            assert!(in_u(&f.generator(Kind::Xi, i).unwrap()).unwrap(), "xi{i} vars={vars}");
        }
        if odd {
            assert!(in_u(&f.generator(Kind::V0, 0).unwrap()).unwrap());
            let w0 = f.generator(Kind::W, 0).unwrap();
            assert!(residue_components(&w0).unwrap().is_zero());
        } else {
            let v0 = f.generator(Kind::V0, 0).unwrap();
            assert!(residue_components(&v0).unwrap().is_zero());
        }
    }
}

#[test]
fn basis_counts() {
    for vars in 2..=7usize {
        for ell in 0..=vars {
            assert_eq!(basis_indices(vars, ell).len() as u128, binomial(vars as i64, ell as i64), "{vars} {ell}");
        }
    }
}

#[test]
fn p_block_det_is_delta() {
    for vars in [2usize, 4, 6] {
        assert_eq!(bareiss_det(p_block(vars).unwrap()).unwrap(), delta_plus_e(vars));
    }
}

#[test]
fn small_determinants() {
    for (vars, ell) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2)] {
        let r = det_identity_symbolic(vars, ell).unwrap();
        println!("{vars} {ell} {:?}", r);
        assert!(r.matches && r.degree_ok, "{vars} {ell}");
    }
}
