//! One line per acceptance criterion. Every comparison is exact.
//!
//! Criterion 5 includes the closed sign formula for `Delta^+` at the
//! specialization `e_1 = -e_{2n} = 1`. The formula as stated disagrees with
//! the computed value whenever the exponent `E` is odd, so that line reports
//! FAIL; the test asserts that this is the only discrepancy and that the
//! corrected formula `(-1)^{(n(n+1)/2 - 1) E}` holds.

use std::time::Instant;

use qkz_core::combinat::{
    combine, express_in_span, lemma91_check, out_of_range_monomials, span_rank, specialization_bridge,
    termination_check,
};
use qkz_core::construct::family;
use qkz_core::linalg::bareiss_det;
use qkz_core::nullres::{block_order_sign, degree_sum_check, det_identity_check, in_u, p_block, DetMode};
use qkz_core::poly::delta_plus_e;
use qkz_core::qchar::{branching, fermion_product, fermionic_identity, ising_char, verify_tetranomial, virasoro_product};
use qkz_core::resolution::{bas_partition_check, compare_with_character, complex_check};

const SEED: u64 = 20240601;
const TRIALS: usize = 8;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    note: String,
}

fn report(lines: &[Line]) {
    for l in lines {
        println!(
            "criterion {} {:<28} {}  tolerance=exact  {}",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.note
        );
    }
}

fn determinants() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    let cases = [
        (2, 1, DetMode::Symbolic),
        (2, 2, DetMode::Symbolic),
        (4, 1, DetMode::Symbolic),
        (4, 2, DetMode::Symbolic),
        (4, 3, DetMode::Randomized),
        (6, 1, DetMode::Randomized),
        (6, 2, DetMode::Randomized),
        (3, 1, DetMode::Symbolic),
        (3, 2, DetMode::Symbolic),
        (5, 1, DetMode::Symbolic),
    ];
    for (vars, ell, mode) in cases {
        let r = det_identity_check(vars, ell, mode, TRIALS, SEED).unwrap();
        // c = 1 refers to the block ordering diag(P, P) with det P = Delta^+
        let unit_c = vars % 2 == 1
            || ell != 1
            || (r.c.clone() * num_rational::BigRational::from_integer(block_order_sign(vars).unwrap().into())
                == num_rational::BigRational::from_integer(1.into())
                && bareiss_det(p_block(vars).unwrap()).unwrap() == delta_plus_e(vars));
        if !(r.matches && r.degree_ok && !num_traits::Zero::is_zero(&r.c) && unit_c) {
            bad.push(format!("({vars},{ell}) {r:?}"));
        }
        if mode == DetMode::Randomized {
            assert!(r.trials >= 8);
        }
    }
    Line { id: 1, name: "determinant identities", pass: bad.is_empty(), note: format!("{:?} {:.1?}", bad, t.elapsed()) }
}

fn membership() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for (vars, ell_max) in [(2, 4), (4, 4), (6, 4), (8, 4), (3, 3), (5, 3), (7, 3)] {
        let f = family(vars);
        for ell in 0..=ell_max.min(vars) {
            for (idx, q) in f.enumerate_basis(ell).unwrap() {
                count += 1;
                if !in_u(&q).unwrap() {
                    bad.push(format!("{vars} {idx}"));
                }
            }
        }
    }
    Line { id: 2, name: "null-residue membership", pass: bad.is_empty(), note: format!("{count} elements {bad:?} {:.1?}", t.elapsed()) }
}

fn tetranomial() -> Line {
    let t = Instant::now();
    let bad: Vec<i64> = (0..=12).filter(|&n| !verify_tetranomial(n).ok()).collect();
    Line { id: 3, name: "q-tetranomial identity", pass: bad.is_empty(), note: format!("n<=12 {bad:?} {:.1?}", t.elapsed()) }
}

fn degree_sums() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    for vars in 2..=8 {
        for ell in 0..=vars {
            let d = degree_sum_check(vars, ell);
            if !d.ok() {
                bad.push(d);
            }
        }
    }
    Line { id: 4, name: "degree sums", pass: bad.is_empty(), note: format!("{bad:?} {:.1?}", t.elapsed()) }
}

/// Returns the line and whether the only failure is the documented sign.
fn spanning() -> (Line, bool) {
    let t = Instant::now();
    let mut ranks_ok = true;
    for n in 1..=5 {
        for ell in 0..=2 * n {
            ranks_ok &= span_rank(n, ell).unwrap().full;
        }
    }
    let mut structural = true;
    let mut stated = true;
    let mut corrected = true;
    let mut sign_failures_have_odd_exponent = true;
    for vars in 2..=6 {
        let r = specialization_bridge(vars, 3).unwrap();
        structural &= r.structural_ok() && r.delta_is_unit();
        stated &= r.closed_form_ok();
        corrected &= r.corrected_form_ok();
        for d in &r.delta_sign {
            if !d.agrees() {
                sign_failures_have_odd_exponent &= d.exponent % 2 == 1;
            }
        }
    }
    let pass = ranks_ok && structural && stated;
    let documented = ranks_ok && structural && corrected && !stated && sign_failures_have_odd_exponent;
    let note = format!(
        "ranks={ranks_ok} bridge={structural} stated-sign={stated} corrected-sign={corrected} {:.1?}",
        t.elapsed()
    );
    (Line { id: 5, name: "spanning and independence", pass, note }, documented)
}

fn reduction() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut longest = 0;
    for n in 1..=3 {
        for l1 in 1..=n.min(3) {
            let r = termination_check(n, l1).unwrap();
            ok &= r.monotone && r.terminates;
            longest = longest.max(r.longest_chain);
            ok &= lemma91_check(n, l1);
        }
        for ell in 1..=2 * n {
            for m in out_of_range_monomials(n, ell) {
                ok &= combine(n, ell, &express_in_span(&m).unwrap()).unwrap() == m;
            }
        }
    }
    Line { id: 6, name: "index reduction", pass: ok, note: format!("longest chain {longest} {:.1?}", t.elapsed()) }
}

fn resolution() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (vars, ell_max) in [(2, 1), (4, 2), (6, 3), (3, 1), (5, 2)] {
        for ell in 0..=ell_max {
            let c = compare_with_character(vars, ell, 10).unwrap();
            if !c.matches {
                bad.push(format!("dims {vars} {ell}"));
            }
        }
        if !complex_check(vars, 3).unwrap() {
            bad.push(format!("complex {vars}"));
        }
        for ell in 0..(vars / 2).max(1) {
            if !bas_partition_check(vars, ell).ok {
                bad.push(format!("partition {vars} {ell}"));
            }
        }
    }
    Line { id: 7, name: "characters and resolution", pass: bad.is_empty(), note: format!("{bad:?} {:.1?}", t.elapsed()) }
}

fn series() -> Line {
    let t = Instant::now();
    let mut ok = true;
    for lambda in 0..=3u32 {
        let b = branching((lambda % 2) as u8, lambda, 20).unwrap();
        ok &= b.agrees_with(&virasoro_product(lambda, 20));
    }
    for i in 0..=1u8 {
        ok &= fermionic_identity(i, 15, 6).unwrap().equal;
        ok &= ising_char(i, 20).agrees_with(&fermion_product(20));
    }
    Line { id: 8, name: "branching and fermionic", pass: ok, note: format!("{:.1?}", t.elapsed()) }
}

#[test]
fn acceptance() {
    let (span_line, span_documented) = spanning();
    let lines = vec![
        determinants(),
        membership(),
        tetranomial(),
        degree_sums(),
        span_line,
        reduction(),
        resolution(),
        series(),
    ];
    report(&lines);
    for l in &lines {
        if l.id == 5 && !l.pass {
            assert!(span_documented, "criterion 5 failed beyond the documented sign discrepancy: {}", l.note);
            println!("criterion 5 note: only the stated sign of Delta^+ fails, at odd exponents; the corrected sign holds");
        } else {
            assert!(l.pass, "criterion {} failed: {}", l.id, l.note);
        }
    }
}
