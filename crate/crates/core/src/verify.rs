//! Suites of checks with structured, deterministically ordered reports.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combinat::{
    express_in_span, lemma91_check, monotonicity_random, out_of_range_monomials, span_rank, specialization_bridge,
    termination_check, combine,
};
use crate::construct::{basis_indices, binomial, family, Kind};
use crate::linalg::bareiss_det;
use crate::nullres::{block_order_sign, degree_sum_check, det_identity_check, in_u, p_block, DetMode};
use crate::poly::delta_plus_e;
use crate::qchar::{
    branching, ch_m_nonnegative, euler_characteristic_check, fermion_product, fermionic_identity, ising_char,
    qbinom_rec1, qbinom_rec2, verify_tetranomial, virasoro_product, Base,
};
use crate::resolution::{bas_partition_check, compare_with_character, complex_check};
use crate::{Error, Parity, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Basis,
    Det,
    Span,
    Tetra,
    Char,
    Resolution,
    Special,
}

impl Suite {
    pub const ALL: [Suite; 7] = [Suite::Basis, Suite::Det, Suite::Span, Suite::Tetra, Suite::Char, Suite::Resolution, Suite::Special];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Basis => "basis",
            Suite::Det => "det",
            Suite::Span => "span",
            Suite::Tetra => "tetra",
            Suite::Char => "char",
            Suite::Resolution => "resolution",
            Suite::Special => "special",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Parameters shared by the suites. `None` means the suite's default grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    /// number of variables (`--even N` gives `N`, `--odd N` gives `N`)
    pub vars: Option<usize>,
    pub ell: Option<usize>,
    /// half-size `n` of `Gamma^(2n)`
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub cutoff: usize,
    pub mode: Option<DetMode>,
    pub trials: usize,
    pub seed: u64,
    /// record wall-clock time per suite (breaks byte-identical output)
    pub timing: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { vars: None, ell: None, n: None, n_max: None, cutoff: 20, mode: None, trials: 8, seed: 0, timing: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub params: Value,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

struct Collector {
    checks: Vec<Check>,
}

impl Collector {
    fn new() -> Self {
        Collector { checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: Option<Value>, counterexample: Option<Value>) {
        self.checks.push(Check { name: name.into(), pass, detail, counterexample });
    }

    /// Records the outcome of a fallible check. Budget errors abort the suite;
    /// other errors count as failures carrying the message.
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, Option<Value>, Option<Value>)>) -> Result<()> {
        let name = name.into();
        match f() {
            Ok((pass, detail, cx)) => self.push(name, pass, detail, cx),
            Err(e @ Error::Budget(_)) => return Err(e),
            Err(e) => self.push(name, false, None, Some(json!({ "error": e.to_string() }))),
        }
        Ok(())
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).unwrap_or(Value::Null)
}

fn parity_name(vars: usize) -> &'static str {
    match Parity::of(vars) {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn ell_range(vars: usize, ell: Option<usize>, max: usize) -> Vec<usize> {
    match ell {
        Some(l) => vec![l],
        None => (0..=vars.min(max)).collect(),
    }
}

fn basis_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let sizes: Vec<usize> = p.vars.map_or_else(|| (2..=6).collect(), |v| vec![v]);
    for &vars in &sizes {
        crate::check_budget(vars)?;
        c.run(format!("counts {}={vars}", parity_name(vars)), || {
            let bad: Vec<usize> =
                (0..=vars).filter(|&l| basis_indices(vars, l).len() as u128 != binomial(vars as i64, l as i64)).collect();
            Ok((bad.is_empty(), None, (!bad.is_empty()).then(|| json!({ "ell": bad }))))
        })?;
        c.run(format!("big-xi {}={vars}", parity_name(vars)), || {
            let f = family(vars);
            let xi1 = f.generator(Kind::Xi, 1)?;
            let first = if vars % 2 == 0 { f.generator(Kind::W, 1)? } else { f.generator(Kind::V0, 0)? };
            let ok1 = *f.generator(Kind::Xi1, 0)? == *first;
            let ok2 = *f.generator(Kind::Xi2, 0)? == xi1.scale_int(&2.into());
            Ok((ok1 && ok2, Some(json!({ "xi1_is_first_factor": ok1, "xi2_is_twice_xi_1": ok2 })), None))
        })?;
        for ell in ell_range(vars, p.ell, 3) {
            c.run(format!("membership {}={vars} ell={ell}", parity_name(vars)), || {
                let f = family(vars);
                let mut count = 0;
                for (idx, q) in f.enumerate_basis(ell)? {
                    count += 1;
                    if !in_u(&q)? {
                        return Ok((false, None, Some(json!({ "label": to_value(&idx), "element": to_value(&q) }))));
                    }
                }
                Ok((true, Some(json!({ "elements": count })), None))
            })?;
        }
        c.run(format!("degree-sum {}={vars}", parity_name(vars)), || {
            let bad: Vec<Value> =
                (0..=vars).map(|l| degree_sum_check(vars, l)).filter(|d| !d.ok()).map(|d| to_value(&d)).collect();
            Ok((bad.is_empty(), None, bad.first().cloned()))
        })?;
    }
    Ok(())
}

/// The default determinant grid: `(vars, ell, symbolic?)`.
pub const DET_GRID: [(usize, usize, bool); 10] = [
    (2, 1, true),
    (2, 2, true),
    (4, 1, true),
    (4, 2, true),
    (3, 1, true),
    (3, 2, true),
    (5, 1, true),
    (4, 3, false),
    (6, 1, false),
    (6, 2, false),
];

fn det_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let grid: Vec<(usize, usize, DetMode)> = match p.vars {
        Some(v) => ell_range(v, p.ell, v)
            .into_iter()
            .filter(|&l| l >= 1)
            .map(|l| (v, l, p.mode.unwrap_or(DetMode::Symbolic)))
            .collect(),
        None => DET_GRID
            .iter()
            .map(|&(v, l, s)| (v, l, p.mode.unwrap_or(if s { DetMode::Symbolic } else { DetMode::Randomized })))
            .collect(),
    };
    for (vars, ell, mode) in grid {
        c.run(format!("det {}={vars} ell={ell}", parity_name(vars)), || {
            let r = det_identity_check(vars, ell, mode, p.trials, p.seed)?;
            let ok = r.matches && r.degree_ok && !num_traits::Zero::is_zero(&r.c);
            Ok((ok, Some(to_value(&r)), (!ok).then(|| to_value(&r))))
        })?;
        if ell == 1 && vars % 2 == 0 && mode == DetMode::Symbolic {
            c.run(format!("det-block even={vars}"), || {
                let r = det_identity_check(vars, 1, mode, p.trials, p.seed)?;
                let sign = block_order_sign(vars)?;
                let c_block = r.c * num_rational::BigRational::from_integer(sign.into());
                let p_ok = bareiss_det(p_block(vars)?)? == delta_plus_e(vars);
                let ok = num_traits::One::is_one(&c_block) && p_ok;
                Ok((ok, Some(json!({ "c_block_order": crate::nullres::rational_string::format_rational(&c_block), "det_p_is_delta": p_ok })), None))
            })?;
        }
    }
    Ok(())
}

fn span_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let ns: Vec<usize> = p.n.map_or_else(|| (1..=3).collect(), |n| vec![n]);
    for &n in &ns {
        let ells: Vec<usize> = p.ell.map_or_else(|| (0..=2 * n).collect(), |l| vec![l]);
        for ell in ells {
            c.run(format!("span-rank n={n} ell={ell}"), || {
                let r = span_rank(n, ell)?;
                Ok((r.full, Some(json!({ "rank": r.rank, "dim": r.dim })), (!r.full).then(|| to_value(&r))))
            })?;
        }
        if p.ell.is_some() {
            continue;
        }
        c.run(format!("out-of-range n={n}"), || {
            let mut count = 0;
            for ell in 1..=2 * n {
                for m in out_of_range_monomials(n, ell) {
                    count += 1;
                    let coeffs = express_in_span(&m)?;
                    if combine(n, ell, &coeffs)? != m {
                        return Ok((false, None, Some(to_value(&m))));
                    }
                }
            }
            Ok((true, Some(json!({ "monomials": count })), None))
        })?;
        for l1 in 2..=n.min(3) {
            c.run(format!("reduction n={n} l1={l1}"), || {
                let r = termination_check(n, l1)?;
                Ok((r.ok(), Some(to_value(&r)), None))
            })?;
        }
        c.run(format!("uniqueness n={n}"), || Ok(((1..=n.min(3)).all(|l1| lemma91_check(n, l1)), None, None)))?;
    }
    if p.n.is_none() {
        c.run("monotonicity-random n=4", || {
            let r = monotonicity_random(4, 4, 500, p.seed)?;
            let ok = r.violations.is_empty();
            Ok((ok, Some(json!({ "samples": r.samples, "seed": r.seed })), (!ok).then(|| to_value(&r.violations))))
        })?;
    }
    Ok(())
}

fn tetra_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let n_max = p.n_max.unwrap_or(12);
    for n in 0..=n_max as i64 {
        let r = verify_tetranomial(n);
        c.push(format!("tetranomial n={n}"), r.ok(), None, (!r.ok()).then(|| to_value(&r)));
    }
    Ok(())
}

fn char_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let cutoff = p.cutoff;
    c.push("qbinom-recursions", (0..=30).all(|m| (0..=m).all(|r| qbinom_rec1(m, r, Base::Q) == qbinom_rec2(m, r, Base::Q))), None, None);
    for lambda in 0..=3u32 {
        let i = (lambda % 2) as u8;
        c.run(format!("branching i={i} lambda={lambda}"), || {
            let b = branching(i, lambda, cutoff)?;
            let v = virasoro_product(lambda, cutoff);
            let ok = b.agrees_with(&v);
            Ok((ok, None, (!ok).then(|| json!({ "branching": to_value(&b), "product": to_value(&v) }))))
        })?;
    }
    for i in 0..=1u8 {
        c.run(format!("fermionic i={i}"), || {
            let r = fermionic_identity(i, cutoff.min(15), 6)?;
            Ok((r.equal, Some(json!({ "cutoff": r.cutoff, "z_range": r.z_range })), (!r.equal).then(|| to_value(&r))))
        })?;
        let s = ising_char(i, cutoff);
        let ok = s.agrees_with(&fermion_product(cutoff));
        c.push(format!("ising i={i}"), ok, None, (!ok).then(|| to_value(&s)));
    }
    for vars in 1..=7usize {
        let ok = (0..=vars as i64).all(|l| euler_characteristic_check(vars, l, cutoff.min(15)));
        c.push(format!("euler-characteristic vars={vars}"), ok, None, None);
        let ok = (0..=(vars as i64) / 2).all(|l| ch_m_nonnegative(vars, l, cutoff));
        c.push(format!("ch-m-nonnegative vars={vars}"), ok, None, None);
    }
    Ok(())
}

/// Default sizes for the resolution suite: `(vars, max ell)`.
pub const RESOLUTION_GRID: [(usize, usize); 5] = [(2, 1), (3, 1), (4, 2), (5, 2), (6, 3)];

fn resolution_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let d_max = 10;
    let grid: Vec<(usize, Vec<usize>)> = match p.vars {
        Some(v) => vec![(v, ell_range(v, p.ell, v))],
        None => RESOLUTION_GRID.iter().map(|&(v, m)| (v, (0..=m).collect())).collect(),
    };
    for (vars, ells) in grid {
        for &ell in &ells {
            c.run(format!("quotient-dims {}={vars} ell={ell}", parity_name(vars)), || {
                let r = compare_with_character(vars, ell, d_max)?;
                Ok((r.matches, Some(json!({ "dims": r.computed })), (!r.matches).then(|| to_value(&r))))
            })?;
        }
        let top = ells.iter().copied().max().unwrap_or(0) + 1;
        c.run(format!("complex {}={vars}", parity_name(vars)), || Ok((complex_check(vars, top)?, None, None)))?;
        for ell in 0..(vars / 2).max(1) {
            let r = bas_partition_check(vars, ell);
            c.push(format!("bas-partition {}={vars} ell={ell}", parity_name(vars)), r.ok, Some(to_value(&r)), None);
        }
    }
    Ok(())
}

fn special_suite(p: &Params, c: &mut Collector) -> Result<()> {
    let sizes: Vec<usize> = p.vars.map_or_else(|| (2..=6).collect(), |v| vec![v]);
    let ell_max = p.ell.unwrap_or(3);
    for vars in sizes {
        let tag = format!("{}={vars}", parity_name(vars));
        let r = match specialization_bridge(vars, ell_max) {
            Ok(r) => r,
            Err(e @ Error::Budget(_)) => return Err(e),
            Err(e) => {
                c.push(format!("bridge {tag}"), false, None, Some(json!({ "error": e.to_string() })));
                continue;
            }
        };
        c.push(format!("p-pattern {tag}"), r.p_pattern, None, None);
        c.push(format!("degree-one-monomials {tag}"), r.vw_monomials, None, None);
        c.push(format!("xi-formula {tag}"), r.xi_formula, None, None);
        c.push(format!("family {tag} ell<={}", r.family_ell_max), r.family_matches, None, None);
        c.push(format!("delta-unit {tag}"), r.delta_is_unit(), Some(json!({ "delta": r.delta_value })), None);
        if vars % 2 == 0 {
            let sign = to_value(&r.delta_sign);
            let ok = r.closed_form_ok();
            c.push(format!("delta-sign-stated {tag}"), ok, None, (!ok).then(|| sign.clone()));
            c.push(format!("delta-sign-corrected {tag}"), r.corrected_form_ok(), None, None);
        }
    }
    Ok(())
}

/// Runs one suite.
pub fn run_suite(suite: Suite, p: &Params) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut c = Collector::new();
    match suite {
        Suite::Basis => basis_suite(p, &mut c)?,
        Suite::Det => det_suite(p, &mut c)?,
        Suite::Span => span_suite(p, &mut c)?,
        Suite::Tetra => tetra_suite(p, &mut c)?,
        Suite::Char => char_suite(p, &mut c)?,
        Suite::Resolution => resolution_suite(p, &mut c)?,
        Suite::Special => special_suite(p, &mut c)?,
    }
    let pass = c.checks.iter().all(|x| x.pass);
    let mut params = to_value(p);
    if let Value::Object(m) = &mut params {
        m.remove("timing");
        m.retain(|_, v| !v.is_null());
    }
    Ok(SuiteReport {
        suite,
        params,
        pass,
        checks: c.checks,
        elapsed_ms: p.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Runs the given suites in the given order.
pub fn run(suites: &[Suite], p: &Params) -> Result<VerifyReport> {
    let suites = suites.iter().map(|&s| run_suite(s, p)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { pass: suites.iter().all(|s| s.pass), suites })
}
