use qkz_core::qchar::{ch_m, ch_u};
use qkz_core::resolution::{bas_partition_check, compare_with_character, complex_check, graded_quotient_slices, xi1_injectivity};

#[test]
fn quotient_dims_match_characters() {
    for (vars, ell_max, d) in [(2usize, 1usize, 8i64), (3, 1, 8), (4, 2, 8)] {
        for ell in 0..=ell_max {
            let c = compare_with_character(vars, ell, d).unwrap();
            println!("{vars} {ell} {:?} {:?}", c.computed, c.character);
            assert!(c.matches, "{vars} {ell}");
        }
    }
}

#[test]
fn u_slices_match_ch_u() {
    let s = graded_quotient_slices(4, 2, 8).unwrap();
    let ch = ch_u(4, 2, 8);
    for sl in &s {
        assert_eq!(num_bigint::BigInt::from(sl.u_dim), ch.coeffs[sl.degree as usize]);
    }
    let _ = ch_m(4, 2, 8);
}

#[test]
fn complex_and_partition() {
    assert!(complex_check(4, 2).unwrap());
    assert!(complex_check(3, 2).unwrap());
    let p = bas_partition_check(4, 2);
    assert_eq!((p.plus, p.minus), (3, 3));
    // v1 ^ v2 has m = 0 and cannot acquire w1
    assert!(p.down_bijective && !p.up_bijective);
    for vars in 2..=7 {
        for ell in 0..vars / 2 {
            assert!(bas_partition_check(vars, ell).ok, "{vars} {ell}");
        }
    }
}

#[test]
fn xi1_is_injective() {
    assert!(xi1_injectivity(2, 0, 4).unwrap().injective);
    assert!(xi1_injectivity(4, 0, 4).unwrap().injective);
    assert!(xi1_injectivity(4, 1, 6).unwrap().injective);
}
