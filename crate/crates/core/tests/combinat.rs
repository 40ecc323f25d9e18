use qkz_core::combinat::{
    lemma91_check, monotonicity_random, out_of_range_monomials, reduction_trace, span_rank, specialization_bridge,
    termination_check, express_in_span, combine, parse_descriptor,
};

#[test]
fn bridge_structure() {
    for vars in 2..=7usize {
        let r = specialization_bridge(vars, 3).unwrap();
        println!("{vars} {:?}", r);
        assert!(r.structural_ok(), "vars={vars}");
    }
}

#[test]
fn spans_are_full() {
    for n in 1..=3usize {
        for ell in 0..=2 * n {
            let r = span_rank(n, ell).unwrap();
            assert!(r.full, "{n} {ell} {:?}", r);
        }
    }
}

#[test]
fn out_of_range_in_span() {
    for n in 2..=3usize {
        for ell in 1..=n {
            for m in out_of_range_monomials(n, ell) {
                let c = express_in_span(&m).unwrap();
                assert_eq!(combine(n, ell, &c).unwrap(), m);
            }
        }
    }
}

#[test]
fn termination() {
    for n in 2..=5usize {
        for l1 in 2..=n {
            let r = termination_check(n, l1).unwrap();
            println!("{n} {l1} {:?}", r);
            assert!(r.monotone && r.terminates, "{n} {l1}");
        }
    }
}

#[test]
fn lemma91() {
    for n in 2..=5usize {
        for l1 in 1..=n {
            assert!(lemma91_check(n, l1), "{n} {l1}");
        }
    }
}

#[test]
fn random_monotonicity() {
    let r = monotonicity_random(4, 4, 500, 7).unwrap();
    assert!(r.violations.is_empty());
}

#[test]
fn trace_ends_at_zero() {
    let d = parse_descriptor(4, "(1,2,4|2,4)").unwrap();
    let t = reduction_trace(&d).unwrap();
    println!("{t:?}");
    assert_eq!(t.last().unwrap().case, "zero");
}
