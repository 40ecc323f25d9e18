//! Linear algebra over `Gamma = span(alpha_1..alpha_n, beta_1..beta_n)`:
//! the forms `alpha_I ^ beta_J ^ omega_K`, their rank, the specialization
//! that turns the polynomial generators into these forms, and the index
//! rewriting used to show that out-of-range monomials lie in their span.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{binomial, combinations, even_indices, family, BasisIndex, Kind};
use crate::linalg::{solve_columns, SparseEchelon};
use crate::nullres::{delta_exponent, rational_string};
use crate::poly::{delta_plus_e, special_even, special_odd, specialize_e, MPoly};
use crate::wedge::{sort_sign, WedgeElement};
use crate::{check_budget, Error, Parity, Result};

/// Reads an index modulo `n` in the representatives `1..=n`.
pub fn norm_index(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

/// An element of `wedge^l Gamma^(2n)`. Slot `i-1` holds `alpha_i`, slot
/// `n+j-1` holds `beta_j`; keys are strictly increasing slot tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaWedge {
    pub n: usize,
    pub ell: usize,
    #[serde(with = "coeff_map")]
    pub coeffs: BTreeMap<Vec<u16>, BigRational>,
}

mod coeff_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<u16>, BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&Vec<u16>, String)> = m.iter().map(|(k, c)| (k, rational_string::format_rational(c))).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Vec<u16>, BigRational>, D::Error> {
        let v: Vec<(Vec<u16>, String)> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|(k, c)| Ok((k, rational_string::parse_rational(&c).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl GammaWedge {
    pub fn zero(n: usize, ell: usize) -> Self {
        GammaWedge { n, ell, coeffs: BTreeMap::new() }
    }

    pub fn unit(n: usize) -> Self {
        let mut g = GammaWedge::zero(n, 0);
        g.coeffs.insert(Vec::new(), BigRational::one());
        g
    }

    /// `alpha_i` with the index read modulo `n`.
    pub fn alpha(n: usize, i: i64) -> Self {
        GammaWedge::slot(n, norm_index(i, n) - 1)
    }

    /// `beta_j` with the index read modulo `n`.
    pub fn beta(n: usize, j: i64) -> Self {
        GammaWedge::slot(n, n + norm_index(j, n) - 1)
    }

    fn slot(n: usize, s: usize) -> Self {
        let mut g = GammaWedge::zero(n, 1);
        g.coeffs.insert(vec![s as u16], BigRational::one());
        g
    }

    /// Accumulates `c * e_{slots}` for an arbitrary slot sequence.
    pub fn add_term(&mut self, slots: &[u16], c: BigRational) {
        let mut t = slots.to_vec();
        let Some(sign) = sort_sign(&mut t) else {
            return;
        };
        let c = if sign < 0 { -c } else { c };
        let e = self.coeffs.entry(t.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &o.coeffs {
            out.add_term(t, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return GammaWedge::zero(self.n, self.ell);
        }
        GammaWedge { n: self.n, ell: self.ell, coeffs: self.coeffs.iter().map(|(t, a)| (t.clone(), a * c)).collect() }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = GammaWedge::zero(self.n, self.ell + o.ell);
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                let mut t = a.clone();
                t.extend_from_slice(b);
                out.add_term(&t, x * y);
            }
        }
        out
    }

    /// Slot tuples as readable names, e.g. `a1^b2`.
    pub fn slot_name(&self, s: u16) -> String {
        let s = s as usize;
        if s < self.n {
            format!("a{}", s + 1)
        } else {
            format!("b{}", s - self.n + 1)
        }
    }
}

impl fmt::Display for GammaWedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (t, c) in &self.coeffs {
            let name = if t.is_empty() { "1".to_string() } else { t.iter().map(|&s| self.slot_name(s)).collect::<Vec<_>>().join("^") };
            let neg = c.is_negative();
            if !first {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            if a.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}*{name}", rational_string::format_rational(&a))?;
            }
        }
        Ok(())
    }
}

/// `omega_k = sum_{r=1}^n alpha_{r-k+1} ^ beta_r`.
pub fn omega(n: usize, k: i64) -> GammaWedge {
    let mut out = GammaWedge::zero(n, 2);
    for r in 1..=n as i64 {
        let a = norm_index(r - k + 1, n) - 1;
        let b = n + r as usize - 1;
        out.add_term(&[a as u16, b as u16], BigRational::one());
    }
    out
}

/// `alpha_I ^ beta_J ^ omega_K` for an even-type label.
pub fn abw_element(n: usize, idx: &BasisIndex) -> Result<GammaWedge> {
    if idx.v0 {
        return Err(Error::Index("labels with v0 have no counterpart in Gamma".into()));
    }
    idx.validate(2 * n)?;
    let mut acc = GammaWedge::unit(n);
    for &i in &idx.i {
        acc = acc.wedge(&GammaWedge::alpha(n, i as i64));
    }
    for &j in &idx.j {
        acc = acc.wedge(&GammaWedge::beta(n, j as i64));
    }
    for &k in &idx.k {
        acc = acc.wedge(&omega(n, k as i64));
    }
    Ok(acc)
}

fn integer_row(g: &GammaWedge, pos: &HashMap<Vec<u16>, usize>) -> BTreeMap<usize, BigInt> {
    let den = g.coeffs.values().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    g.coeffs.iter().map(|(t, c)| (pos[t], (c * BigRational::from_integer(den.clone())).to_integer())).collect()
}

fn tuple_positions(n: usize, ell: usize) -> (Vec<Vec<u16>>, HashMap<Vec<u16>, usize>) {
    let tuples = combinations(0, 2 * n as i64 - 1, ell);
    let pos = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    (tuples, pos)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanRank {
    pub n: usize,
    pub ell: usize,
    pub rank: usize,
    pub dim: usize,
    pub full: bool,
}

/// Rank of `{alpha_I ^ beta_J ^ omega_K}` inside `wedge^l Gamma^(2n)`.
pub fn span_rank(n: usize, ell: usize) -> Result<SpanRank> {
    check_budget(2 * n)?;
    let (_, pos) = tuple_positions(n, ell);
    let mut ech = SparseEchelon::new();
    for idx in even_indices(n, ell) {
        ech.insert(integer_row(&abw_element(n, &idx)?, &pos));
    }
    let dim = binomial(2 * n as i64, ell as i64) as usize;
    let rank = ech.rank();
    Ok(SpanRank { n, ell, rank, dim, full: rank == dim })
}

/// Coefficients expressing `target` in the family `{alpha_I ^ beta_J ^ omega_K}`.
pub fn express_in_span(target: &GammaWedge) -> Result<BTreeMap<BasisIndex, BigRational>> {
    let (n, ell) = (target.n, target.ell);
    check_budget(2 * n)?;
    let (tuples, pos) = tuple_positions(n, ell);
    let labels = even_indices(n, ell);
    let dense = |g: &GammaWedge| {
        let mut v = vec![BigRational::zero(); tuples.len()];
        for (t, c) in &g.coeffs {
            v[pos[t]] = c.clone();
        }
        v
    };
    let cols: Vec<Vec<BigRational>> = labels.iter().map(|l| abw_element(n, l).map(|g| dense(&g))).collect::<Result<_>>()?;
    let y = solve_columns(&cols, &dense(target))?.ok_or(Error::OutsideSpan)?;
    Ok(labels.into_iter().zip(y).filter(|(_, c)| !c.is_zero()).collect())
}

/// Recombines a coefficient map produced by [`express_in_span`].
pub fn combine(n: usize, ell: usize, coeffs: &BTreeMap<BasisIndex, BigRational>) -> Result<GammaWedge> {
    let mut acc = GammaWedge::zero(n, ell);
    for (l, c) in coeffs {
        acc = acc.add(&abw_element(n, l)?.scale(c));
    }
    Ok(acc)
}

/// `alpha_I ^ beta_J` with `|I| + |J| = l` and some `j > n - |I|`.
pub fn out_of_range_monomials(n: usize, ell: usize) -> Vec<GammaWedge> {
    let mut out = Vec::new();
    for l1 in 0..=ell.min(n) {
        let l2 = ell - l1;
        if l2 > n {
            continue;
        }
        for i in combinations(1, n as i64, l1) {
            for j in combinations(1, n as i64, l2) {
                if j.iter().any(|&x| x as usize > n - l1) {
                    let mut g = GammaWedge::unit(n);
                    for &a in &i {
                        g = g.wedge(&GammaWedge::alpha(n, a as i64));
                    }
                    for &b in &j {
                        g = g.wedge(&GammaWedge::beta(n, b as i64));
                    }
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Outcome of specializing the generators to constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub vars: usize,
    /// `P_{r,s}` is the 0/1 pattern
    pub p_pattern: bool,
    /// `v_i`, `w_i` (odd: also `v_0`) become the predicted monomials
    pub vw_monomials: bool,
    /// `xi_k` equals the predicted sum of products of degree-one forms
    pub xi_formula: bool,
    /// `Delta^+` at the specialization
    pub delta_value: String,
    /// `(Delta^+)^E` against the closed sign formula, for each `l`
    pub delta_sign: Vec<DeltaSign>,
    /// `{v_I ^ w_J ^ xi_K}` equals `{+- alpha_I ^ beta_J ^ omega_K}` elementwise
    pub family_matches: bool,
    pub family_ell_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSign {
    pub ell: usize,
    pub exponent: u32,
    pub value: i64,
    /// `(-1)^{n(n+1)/2 * E}` (even case only)
    pub closed_form: Option<i64>,
    /// `(-1)^{(n(n+1)/2 - 1) * E}` (even case only)
    pub corrected_form: Option<i64>,
}

impl DeltaSign {
    pub fn agrees(&self) -> bool {
        self.closed_form.is_none_or(|c| c == self.value)
    }

    pub fn agrees_corrected(&self) -> bool {
        self.corrected_form.is_none_or(|c| c == self.value)
    }
}

impl BridgeReport {
    /// Everything except the closed sign formula.
    pub fn structural_ok(&self) -> bool {
        self.p_pattern && self.vw_monomials && self.xi_formula && self.family_matches
    }

    /// `Delta^+` specializes to a unit, so `det X` stays nonzero.
    pub fn delta_is_unit(&self) -> bool {
        self.delta_value == "1" || self.delta_value == "-1"
    }

    pub fn closed_form_ok(&self) -> bool {
        self.delta_sign.iter().all(DeltaSign::agrees)
    }

    pub fn corrected_form_ok(&self) -> bool {
        self.delta_sign.iter().all(DeltaSign::agrees_corrected)
    }

    pub fn ok(&self) -> bool {
        self.structural_ok() && self.delta_is_unit() && self.closed_form_ok()
    }
}

struct Specializer {
    vars: usize,
    assign: Vec<(usize, BigRational)>,
}

impl Specializer {
    fn new(vars: usize) -> Self {
        let assign = match Parity::of(vars) {
            Parity::Even => special_even(vars),
            Parity::Odd => special_odd(vars),
        };
        Specializer { vars, assign }
    }

    fn value(&self, p: &MPoly) -> Result<BigInt> {
        specialize_e(p, &self.assign)?.constant_value().ok_or(Error::NonIntegral)
    }

    /// Coefficients replaced by their (constant) values, kept in the family space.
    fn wedge(&self, w: &WedgeElement) -> Result<WedgeElement> {
        let space = family(self.vars).space().clone();
        w.try_map_coeffs(&space, |c| Ok(MPoly::constant(&space, self.value(c)?)))
    }

    /// `X^a` as a constant degree-one form.
    fn x_power(&self, a: usize) -> Result<WedgeElement> {
        let space = family(self.vars).space().clone();
        WedgeElement::basis1(self.vars, &space, a as u16, MPoly::one(&space))
    }
}

/// Pushes a `Gamma` form into `H` along `alpha_i -> a[i-1]`, `beta_j -> b[j-1]`.
fn push_forward(g: &GammaWedge, a: &[WedgeElement], b: &[WedgeElement], vars: usize) -> Result<WedgeElement> {
    let fam = family(vars);
    let mut acc = WedgeElement::zero(vars, g.ell, fam.space());
    for (t, c) in &g.coeffs {
        if !c.is_integer() {
            return Err(Error::NonIntegral);
        }
        let mut term = WedgeElement::unit(vars, fam.space());
        for &s in t {
            let s = s as usize;
            let img = if s < g.n { &a[s] } else { &b[s - g.n] };
            term = term.wedge(img)?;
        }
        acc = acc.add(&term.scale_int(&c.to_integer()))?;
    }
    Ok(acc)
}

/// Specializes every generator and checks the constant patterns, the
/// `xi_k` formula, the sign of `Delta^+` and the identification of the two
/// families for `l <= ell_max`.
pub fn specialization_bridge(vars: usize, ell_max: usize) -> Result<BridgeReport> {
    check_budget(vars)?;
    if vars < 2 {
        return Err(Error::Arity("the specialization needs at least two variables".into()));
    }
    let fam = family(vars);
    let n = fam.half();
    let sp = Specializer::new(vars);
    let parity = fam.parity();
    let one = BigInt::one();

    // P_{r,s}
    let mut p_pattern = true;
    let r_max = if parity == Parity::Even { n } else { n + 1 };
    for r in 1..=r_max as i64 {
        for s in 1..=r_max as i64 {
            let want = match parity {
                Parity::Even => s as usize == norm_index(n as i64 - r + 2, n),
                Parity::Odd => s == n as i64 + 2 - r,
            };
            let got = sp.value(&fam.p(r, s)?)?;
            p_pattern &= got == if want { one.clone() } else { BigInt::zero() };
        }
    }

    // degree-one generators
    let xp = |a: usize| sp.x_power(a % vars);
    let mut v: Vec<WedgeElement> = Vec::new();
    let mut w: Vec<WedgeElement> = Vec::new();
    let mut vw_monomials = true;
    for i in 1..=n {
        let vi = sp.wedge(&*fam.generator(Kind::V, i)?)?;
        let wi = sp.wedge(&*fam.generator(Kind::W, i)?)?;
        let (ev, ew) = match parity {
            Parity::Even => (xp(2 * (n - i + 1))?, xp(2 * (n - i + 1) + 1)?),
            Parity::Odd => (xp(2 * (n + 1 - i))?, xp(2 * n + 1 - 2 * i)?),
        };
        vw_monomials &= vi == ev && wi == ew;
        v.push(vi);
        w.push(wi);
    }
    let v0 = if parity == Parity::Odd {
        let v0 = sp.wedge(&*fam.generator(Kind::V0, 0)?)?;
        vw_monomials &= v0 == xp(0)?.sub(&xp(2 * n)?)?;
        Some(v0)
    } else {
        None
    };
    let vi = |i: i64| &v[norm_index(i, n) - 1];
    let wi = |i: i64| &w[norm_index(i, n) - 1];

    // xi_k
    let mut xi_formula = true;
    for k in 1..=n as i64 {
        let xi = sp.wedge(&*fam.generator(Kind::Xi, k as usize)?)?;
        let mut want = WedgeElement::zero(vars, 2, fam.space());
        for r in 1..=n as i64 {
            let t = match parity {
                Parity::Even => xp((2 * (n as i64 + r - k) + 1).rem_euclid(vars as i64) as usize)?.wedge(vi(r))?,
                Parity::Odd => vi(k - r).wedge(wi(r))?.neg(),
            };
            want = want.add(&t)?;
        }
        xi_formula &= xi == want;
        if parity == Parity::Even {
            let mut alt = WedgeElement::zero(vars, 2, fam.space());
            for r in 1..=n as i64 {
                alt = alt.add(&wi(k - r + 1).wedge(vi(r))?)?;
            }
            xi_formula &= xi == alt;
        }
    }

    // Delta^+
    let delta = sp.value(&delta_plus_e(vars))?;
    let half = (n * (n + 1) / 2) as u64;
    let delta_sign = (1..=vars)
        .map(|ell| {
            let e = delta_exponent(vars, ell);
            let value = if e % 2 == 1 { delta.clone() } else { delta.clone() * &delta };
            let value: i64 = if delta.abs().is_one() { value.try_into().unwrap_or(0) } else { 0 };
            let sign = |x: u64| if x.is_multiple_of(2) { 1 } else { -1 };
            let closed_form = (parity == Parity::Even).then(|| sign(half * e as u64));
            let corrected_form = (parity == Parity::Even).then(|| sign((half - 1) * e as u64));
            DeltaSign { ell, exponent: e, value, closed_form, corrected_form }
        })
        .collect();

    // alpha_i = v_{2-i} (odd: v_{n+1-i}), beta_j = w_j, omega_k = -xi_k
    let alphas: Vec<WedgeElement> = (1..=n as i64)
        .map(|i| match parity {
            Parity::Even => vi(2 - i).clone(),
            Parity::Odd => vi(n as i64 + 1 - i).clone(),
        })
        .collect();
    let tau = |i: i64| match parity {
        Parity::Even => 2 - i,
        Parity::Odd => n as i64 + 1 - i,
    };
    let mut family_matches = true;
    let top = ell_max.min(vars);
    for ell in 0..=top {
        for idx in crate::construct::basis_indices(vars, ell) {
            let got = sp.wedge(&fam.basis_element(&idx)?)?;
            // v_i is alpha_{tau(i)}, so the alpha labels are relabelled by tau
            let mut g = GammaWedge::unit(n);
            for &i in &idx.i {
                g = g.wedge(&GammaWedge::alpha(n, tau(i as i64)));
            }
            for &j in &idx.j {
                g = g.wedge(&GammaWedge::beta(n, j as i64));
            }
            for &k in &idx.k {
                g = g.wedge(&omega(n, k as i64));
            }
            let mut image = push_forward(&g, &alphas, &w, vars)?;
            if idx.v0 {
                image = v0.as_ref().unwrap().wedge(&image)?;
            }
            let ok = (got == image || got == image.neg()) && !got.is_zero();
            family_matches &= ok;
        }
    }
    Ok(BridgeReport {
        vars,
        p_pattern,
        vw_monomials,
        xi_formula,
        delta_value: delta.to_string(),
        delta_sign,
        family_matches,
        family_ell_max: top,
    })
}

// ---------------------------------------------------------------------------
// Index rewriting on out-of-range monomials.

/// `(i_{l1-1}, ..., i_0 | n - r_k, ..., n - r_0)`: the alpha indices
/// `i[s] = i_s` (strictly decreasing in `s`) and the beta offsets `r`
/// (strictly increasing). The in-range betas are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Descriptor {
    pub n: usize,
    pub i: Vec<i64>,
    pub r: Vec<usize>,
}

impl Descriptor {
    pub fn ell1(&self) -> usize {
        self.i.len()
    }

    pub fn h(&self) -> i64 {
        match (self.i.first(), self.i.last()) {
            (Some(a), Some(b)) => a - b,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let l1 = self.ell1();
        let bad = |why: &str| Err(Error::InvalidStep(format!("{self}: {why}")));
        if l1 == 0 || self.r.is_empty() || self.r.len() > l1 {
            return bad("need 1 <= k+1 <= l1");
        }
        if !self.i.windows(2).all(|w| w[0] > w[1]) || self.i.iter().any(|&x| x < 1 || x > self.n as i64) {
            return bad("alpha indices must satisfy 1 <= i_{l1-1} < ... < i_0 <= n");
        }
        if !self.r.windows(2).all(|w| w[0] < w[1]) || self.r.iter().any(|&x| x >= l1) {
            return bad("offsets must satisfy 0 <= r_0 < ... < r_k <= l1-1");
        }
        Ok(())
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.i.iter().rev().map(|x| x.to_string()).collect();
        let b: Vec<String> = self.r.iter().rev().map(|x| format!("{}", self.n as i64 - *x as i64)).collect();
        write!(f, "({}|{})", a.join(","), b.join(","))
    }
}

/// A choice `(p, sigma)`: new offsets and a permutation of `0..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Choice {
    pub p: Vec<usize>,
    pub sigma: Vec<usize>,
}

/// Which branch of the termination argument a step falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "h-drop")]
    HDrop,
    #[serde(rename = "i-i")]
    Ii,
    #[serde(rename = "i-ii")]
    Iii,
    #[serde(rename = "i-iii")]
    Iiii,
    /// `p_k = l1-1`, `p_0 = 0` inside case (i); not named in the argument
    #[serde(rename = "i-iv")]
    Iiv,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv-a")]
    IVa,
    #[serde(rename = "iv-b")]
    IVb,
    #[serde(rename = "iv-c")]
    IVc,
    #[serde(rename = "iv-d")]
    IVd,
}

impl Case {
    pub fn tag(self) -> &'static str {
        match self {
            Case::Zero => "zero",
            Case::HDrop => "h-drop",
            Case::Ii => "i-i",
            Case::Iii => "i-ii",
            Case::Iiii => "i-iii",
            Case::Iiv => "i-iv",
            Case::II => "ii",
            Case::III => "iii",
            Case::IVa => "iv-a",
            Case::IVb => "iv-b",
            Case::IVc => "iv-c",
            Case::IVd => "iv-d",
        }
    }

    fn is_iv(self) -> bool {
        matches!(self, Case::IVa | Case::IVb | Case::IVc | Case::IVd)
    }

    /// h-preserving and nonzero.
    fn preserves_h(self) -> bool {
        !matches!(self, Case::Zero | Case::HDrop)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub sign: i8,
    pub image: Option<Descriptor>,
    pub h_before: i64,
    pub h_after: i64,
    pub case: Case,
    /// the extremal index is carried by the offsets the argument predicts
    pub consistent: bool,
}

fn permutation_sign(sigma: &[usize]) -> i8 {
    let mut v = sigma.to_vec();
    match sort_sign(&mut v) {
        Some(s) => s as i8,
        None => 0,
    }
}

fn is_permutation(sigma: &[usize]) -> bool {
    let mut v = sigma.to_vec();
    v.sort_unstable();
    v.iter().enumerate().all(|(a, &b)| a == b)
}

/// The alpha indices after the rewrite, positionally (`new[s]` replaces `i_s`).
fn rewritten(d: &Descriptor, c: &Choice) -> Vec<i64> {
    let mut new = d.i.clone();
    for (t, &rt) in d.r.iter().enumerate() {
        new[rt] = d.i[rt] + rt as i64 - c.p[c.sigma[t]] as i64;
    }
    new
}

/// Applies one rewrite step.
pub fn reduce_step(d: &Descriptor, c: &Choice) -> Result<StepOutcome> {
    d.validate()?;
    let l1 = d.ell1();
    let k1 = d.r.len();
    if c.p.len() != k1 || !c.p.windows(2).all(|w| w[0] < w[1]) || c.p.iter().any(|&x| x >= l1) {
        return Err(Error::InvalidStep("p must satisfy 0 <= p_0 < ... < p_k <= l1-1".into()));
    }
    if c.sigma.len() != k1 || !is_permutation(&c.sigma) {
        return Err(Error::InvalidStep("sigma must permute 0..=k".into()));
    }
    let new = rewritten(d, c);
    let h_before = d.h();
    let sgn = permutation_sign(&c.sigma);
    if new.iter().any(|&x| x < 1 || x > d.n as i64) {
        return Err(Error::InvalidStep(format!("{d}: index left 1..=n")));
    }
    // written left to right as i_{l1-1} ... i_0, normal form is increasing
    let mut seq: Vec<i64> = new.iter().rev().copied().collect();
    let Some(sort) = sort_sign(&mut seq) else {
        return Ok(StepOutcome { sign: 0, image: None, h_before, h_after: h_before, case: Case::Zero, consistent: true });
    };
    let image = Descriptor { n: d.n, i: seq.into_iter().rev().collect(), r: c.p.clone() };
    if image == *d {
        return Err(Error::InvalidStep(format!("{d}: the image is proportional to the source")));
    }
    let h_after = image.h();
    let (case, consistent) = classify(d, c, &new, h_before, h_after);
    Ok(StepOutcome { sign: sgn * sort as i8, image: Some(image), h_before, h_after, case, consistent })
}

fn classify(d: &Descriptor, c: &Choice, new: &[i64], h: i64, h2: i64) -> (Case, bool) {
    if h2 < h {
        return (Case::HDrop, true);
    }
    let l1 = d.ell1();
    let k = d.r.len() - 1;
    let top = l1 - 1;
    let (rk_top, r0_zero) = (d.r[k] == top, d.r[0] == 0);
    let (pk_top, p0_zero) = (c.p[k] == top, c.p[0] == 0);
    let (imin, imax) = (d.i[top], d.i[0]);
    // offsets t whose rewritten index reaches the old extremes
    let reach = |target: i64, p_needed: usize| {
        d.r.iter().enumerate().find(|&(_, &rt)| new[rt] == target).map(|(t, _)| (t, c.p[c.sigma[t]] == p_needed))
    };
    match (rk_top, r0_zero) {
        (false, false) => {
            let case = match (pk_top, p0_zero) {
                (false, true) => Case::Ii,
                (true, false) => Case::Iii,
                (false, false) => Case::Iiii,
                (true, true) => Case::Iiv,
            };
            (case, true)
        }
        (false, true) => match reach(imax, 0) {
            Some((_, ok)) => (Case::II, ok),
            None => (Case::II, false),
        },
        (true, false) => match reach(imin, top) {
            Some((_, ok)) => (Case::III, ok),
            None => (Case::III, false),
        },
        (true, true) => match (reach(imin, top), reach(imax, 0)) {
            (Some((t1, ok1)), Some((t2, ok2))) => {
                let case = match (t1 == k, t2 == 0) {
                    (true, true) => Case::IVa,
                    (true, false) => Case::IVb,
                    (false, true) => Case::IVc,
                    (false, false) => Case::IVd,
                };
                (case, ok1 && ok2 && pk_top && p0_zero)
            }
            _ => (Case::IVa, false),
        },
    }
}

/// Every permutation of `0..len` in lexicographic order.
pub fn permutations(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..len).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..len.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..len).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// All choices satisfying the side conditions, i.e. excluding those whose
/// image is proportional to the source.
pub fn valid_choices(d: &Descriptor) -> Vec<Choice> {
    let l1 = d.ell1();
    let k1 = d.r.len();
    let perms = permutations(k1);
    let mut out = Vec::new();
    for p in combinations(0, l1 as i64 - 1, k1) {
        let p: Vec<usize> = p.into_iter().map(|x| x as usize).collect();
        for sigma in &perms {
            let c = Choice { p: p.clone(), sigma: sigma.clone() };
            if reduce_step(d, &c).is_ok() {
                out.push(c);
            }
        }
    }
    out
}

/// All descriptors with `l1` alpha indices in `1..=n`.
pub fn descriptors(n: usize, l1: usize) -> Vec<Descriptor> {
    let mut out = Vec::new();
    for i in combinations(1, n as i64, l1) {
        let i: Vec<i64> = i.into_iter().rev().map(|x| x as i64).collect();
        for k1 in 1..=l1 {
            for r in combinations(0, l1 as i64 - 1, k1) {
                out.push(Descriptor { n, i: i.clone(), r: r.into_iter().map(|x| x as usize).collect() });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationReport {
    pub n: usize,
    pub ell1: usize,
    pub descriptors: usize,
    pub steps: usize,
    pub nonzero_steps: usize,
    /// `h' <= h` on every step
    pub monotone: bool,
    /// every h-preserving step matches the predicted extremal offsets
    pub consistent: bool,
    /// the successor of an h-preserving (ii)/(iii)/(iv) step stays in the predicted class
    pub transitions_ok: bool,
    /// the rewrite graph has no cycle, so every chain of steps ends at zero
    pub terminates: bool,
    pub longest_chain: usize,
    pub cases: BTreeMap<String, usize>,
}

impl TerminationReport {
    pub fn ok(&self) -> bool {
        self.monotone && self.consistent && self.transitions_ok && self.terminates
    }
}

/// Exhaustive run over every descriptor and every valid choice.
pub fn termination_check(n: usize, l1: usize) -> Result<TerminationReport> {
    check_budget(2 * n)?;
    let nodes = descriptors(n, l1);
    let mut edges: BTreeMap<Descriptor, Vec<(Descriptor, Case)>> = BTreeMap::new();
    let mut rep = TerminationReport {
        n,
        ell1: l1,
        descriptors: nodes.len(),
        steps: 0,
        nonzero_steps: 0,
        monotone: true,
        consistent: true,
        transitions_ok: true,
        terminates: true,
        longest_chain: 0,
        cases: BTreeMap::new(),
    };
    for d in &nodes {
        let mut out = Vec::new();
        for c in valid_choices(d) {
            let s = reduce_step(d, &c)?;
            rep.steps += 1;
            rep.monotone &= s.h_after <= s.h_before;
            rep.consistent &= s.consistent;
            *rep.cases.entry(s.case.tag().to_string()).or_default() += 1;
            if let Some(img) = s.image {
                rep.nonzero_steps += 1;
                out.push((img, s.case));
            }
        }
        edges.insert(d.clone(), out);
    }
    // successors of h-preserving steps
    for outs in edges.values() {
        for (img, case) in outs {
            let allowed = |next: Case| match case {
                Case::II => matches!(next, Case::II) || next.is_iv(),
                Case::III => matches!(next, Case::III) || next.is_iv(),
                c if c.is_iv() => next.is_iv(),
                Case::Ii => matches!(next, Case::II) || next.is_iv(),
                Case::Iii => matches!(next, Case::III) || next.is_iv(),
                _ => true,
            };
            for (_, next) in edges.get(img).map(Vec::as_slice).unwrap_or(&[]) {
                if next.preserves_h() && !allowed(*next) {
                    rep.transitions_ok = false;
                }
            }
        }
    }
    // cycle detection and longest chain by memoized DFS
    let mut state: HashMap<Descriptor, u8> = HashMap::new();
    let mut depth: HashMap<Descriptor, usize> = HashMap::new();
    fn visit(
        d: &Descriptor,
        edges: &BTreeMap<Descriptor, Vec<(Descriptor, Case)>>,
        state: &mut HashMap<Descriptor, u8>,
        depth: &mut HashMap<Descriptor, usize>,
    ) -> Option<usize> {
        match state.get(d) {
            Some(1) => return None,
            Some(_) => return Some(depth[d]),
            None => {}
        }
        state.insert(d.clone(), 1);
        let mut best = 0;
        for (img, _) in edges.get(d).map(Vec::as_slice).unwrap_or(&[]) {
            best = best.max(1 + visit(img, edges, state, depth)?);
        }
        state.insert(d.clone(), 2);
        depth.insert(d.clone(), best);
        Some(best)
    }
    for d in &nodes {
        match visit(d, &edges, &mut state, &mut depth) {
            Some(l) => rep.longest_chain = rep.longest_chain.max(l),
            None => {
                rep.terminates = false;
                break;
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub violations: Vec<(Descriptor, Choice)>,
}

/// `h' <= h` on `samples` random valid steps with `l1 <= l1_max`.
pub fn monotonicity_random(n: usize, l1_max: usize, samples: usize, seed: u64) -> Result<MonotonicityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Descriptor> = (2..=l1_max.min(n)).flat_map(|l1| descriptors(n, l1)).collect();
    let mut violations = Vec::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > samples * 100 || pool.is_empty() {
            return Err(Error::Degenerate);
        }
        let d = pool.choose(&mut rng).unwrap();
        let l1 = d.ell1();
        let mut p: Vec<usize> = (0..l1).collect();
        p.shuffle(&mut rng);
        let mut p: Vec<usize> = p[..d.r.len()].to_vec();
        p.sort_unstable();
        let mut sigma: Vec<usize> = (0..d.r.len()).collect();
        sigma.shuffle(&mut rng);
        let c = Choice { p, sigma };
        let Ok(s) = reduce_step(d, &c) else { continue };
        if s.h_after > s.h_before {
            violations.push((d.clone(), c));
        }
        done += 1;
    }
    Ok(MonotonicityReport { n, samples, seed, violations })
}

/// Among the steps with `p = r`, any whose image has the same alpha
/// multiset as the source reproduces the source with coefficient `+1`.
pub fn lemma91_check(n: usize, l1: usize) -> bool {
    for d in descriptors(n, l1) {
        let k1 = d.r.len();
        for sigma in permutations(k1) {
            if sigma.iter().enumerate().all(|(a, &b)| a == b) {
                continue;
            }
            let c = Choice { p: d.r.clone(), sigma: sigma.clone() };
            let new = rewritten(&d, &c);
            let src: BTreeSet<i64> = d.r.iter().map(|&rt| d.i[rt]).collect();
            let mut got: Vec<i64> = d.r.iter().map(|&rt| new[rt]).collect();
            got.sort_unstable();
            if got != src.iter().copied().collect::<Vec<_>>() {
                continue;
            }
            let positional = d.r.iter().enumerate().all(|(t, &rt)| new[rt] == d.i[d.r[sigma[t]]]);
            let mut seq: Vec<i64> = new.iter().rev().copied().collect();
            let sign = sort_sign(&mut seq).map(|s| s as i8 * permutation_sign(&sigma));
            if !positional || sign != Some(1) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub case: String,
    pub descriptor: Option<String>,
    pub h: Option<i64>,
}

/// Follows the first valid step with a nonzero image until every step
/// from the current descriptor gives zero.
pub fn reduction_trace(d: &Descriptor) -> Result<Vec<TraceEntry>> {
    d.validate()?;
    let bound = descriptors(d.n, d.ell1()).len() + 1;
    let mut out = vec![TraceEntry { case: "start".into(), descriptor: Some(d.to_string()), h: Some(d.h()) }];
    let mut cur = d.clone();
    for _ in 0..bound {
        let mut next = None;
        for c in valid_choices(&cur) {
            let s = reduce_step(&cur, &c)?;
            if let Some(img) = s.image {
                next = Some((img, s.case));
                break;
            }
        }
        match next {
            Some((img, case)) => {
                out.push(TraceEntry { case: case.tag().into(), descriptor: Some(img.to_string()), h: Some(img.h()) });
                cur = img;
            }
            None => {
                out.push(TraceEntry { case: Case::Zero.tag().into(), descriptor: None, h: None });
                return Ok(out);
            }
        }
    }
    Err(Error::Budget("rewrite chain longer than the number of descriptors".into()))
}

/// Parses `(i_{l1-1},...,i_0|n-r_k,...,n-r_0)` for a given `n`.
pub fn parse_descriptor(n: usize, s: &str) -> Result<Descriptor> {
    let bad = || Error::Parse(format!("bad descriptor {s:?}"));
    let body = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = body.split_once('|').ok_or_else(bad)?;
    let nums = |t: &str| -> Result<Vec<i64>> {
        t.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
    };
    let i: Vec<i64> = nums(a)?.into_iter().rev().collect();
    let r: Vec<usize> = nums(b)?
        .into_iter()
        .rev()
        .map(|j| usize::try_from(n as i64 - j).map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let d = Descriptor { n, i, r };
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn omega_examples() {
        let mut want = GammaWedge::alpha(2, 1).wedge(&GammaWedge::beta(2, 1));
        want = want.add(&GammaWedge::alpha(2, 2).wedge(&GammaWedge::beta(2, 2)));
        assert_eq!(omega(2, 1), want);
        let w2 = GammaWedge::alpha(2, 2).wedge(&GammaWedge::beta(2, 1)).add(&GammaWedge::alpha(2, 1).wedge(&GammaWedge::beta(2, 2)));
        assert_eq!(omega(2, 2), w2);
        assert_eq!(omega(3, 1), omega(3, 4));
        assert_eq!(omega(3, -1), omega(3, 2));
    }

    #[test]
    fn abw_examples() {
        let a = abw_element(1, &BasisIndex::new(&[], &[], &[1])).unwrap();
        assert_eq!(a, GammaWedge::alpha(1, 1).wedge(&GammaWedge::beta(1, 1)));
        let b = abw_element(2, &BasisIndex::new(&[1], &[1], &[])).unwrap();
        assert_eq!(b, GammaWedge::alpha(2, 1).wedge(&GammaWedge::beta(2, 1)));
        let x = GammaWedge::alpha(2, 1).wedge(&GammaWedge::alpha(2, 2));
        let y = GammaWedge::alpha(2, 2).wedge(&GammaWedge::alpha(2, 1));
        assert_eq!(x.scale(&q(-1)), y);
    }

    #[test]
    fn ranks() {
        assert_eq!(span_rank(1, 2).unwrap(), SpanRank { n: 1, ell: 2, rank: 1, dim: 1, full: true });
        assert_eq!(span_rank(2, 2).unwrap().rank, 6);
        assert_eq!(span_rank(3, 3).unwrap().rank, 20);
    }

    #[test]
    fn express_example() {
        let t = GammaWedge::alpha(2, 2).wedge(&GammaWedge::beta(2, 2));
        let c = express_in_span(&t).unwrap();
        let mut want = BTreeMap::new();
        want.insert(BasisIndex::new(&[], &[], &[1]), q(1));
        want.insert(BasisIndex::new(&[1], &[1], &[]), q(-1));
        assert_eq!(c, want);
        assert_eq!(combine(2, 2, &c).unwrap(), t);
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
    }

    #[test]
    fn single_alpha_has_no_steps() {
        let d = Descriptor { n: 3, i: vec![2], r: vec![0] };
        assert_eq!(d.h(), 0);
        assert!(valid_choices(&d).is_empty());
    }

    #[test]
    fn descriptor_round_trip() {
        let d = Descriptor { n: 4, i: vec![4, 2, 1], r: vec![0, 2] };
        let s = d.to_string();
        assert_eq!(s, "(1,2,4|2,4)");
        assert_eq!(parse_descriptor(4, &s).unwrap(), d);
    }
}
