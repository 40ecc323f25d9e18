//! Residue conditions defining `U_{N,l}`, the matrix of a candidate basis
//! against the monomial basis of `wedge^l H`, its determinant and the
//! coordinates of an element of `U` in the candidate basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{basis_indices, binomial, column_tuples, family, BasisIndex, Kind};
use crate::linalg::{bareiss_det, solve_columns};
use crate::poly::{bar, delta_plus_e, elementary_values, MPoly, Mono, Space, Symbol};
use crate::wedge::WedgeElement;
use crate::{check_budget, Error, Parity, Result};

/// The two families of residue polynomials, keyed by `(l-1)`-tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResidueComponents {
    pub even_part: BTreeMap<Vec<u16>, MPoly>,
    pub odd_part: BTreeMap<Vec<u16>, MPoly>,
    /// exponent of `x` used to clear denominators
    pub clearing: u16,
}

impl ResidueComponents {
    pub fn is_zero(&self) -> bool {
        self.even_part.is_empty() && self.odd_part.is_empty()
    }
}

/// For each `(l-1)`-tuple `J`, `x^c * sum_{m even} bar(P_{J,m}) x^{-m}` and the
/// odd-`m` analogue, with `c = N-1` (or `N` for widened scaffolding).
pub fn residue_components(p: &WedgeElement) -> Result<ResidueComponents> {
    let vars = p.vars();
    if vars < 2 {
        return Err(Error::Arity("residues need at least two variables".into()));
    }
    let clearing = if p.fits_h() { vars as u16 - 1 } else { vars as u16 };
    let mut out = ResidueComponents { clearing, ..Default::default() };
    if p.ell() == 0 {
        return Ok(out);
    }
    let target = Space::bar_target(vars);
    let x = MPoly::symbol(&target, &Symbol::Bar);
    let mut acc: [BTreeMap<Vec<u16>, Vec<MPoly>>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let ell = p.ell();
    for (t, c) in p.terms() {
        let b = bar(c)?;
        if b.is_zero() {
            continue;
        }
        for pos in 0..ell {
            let m = t[pos];
            let mut j = t.clone();
            j.remove(pos);
            let moved = &b * &x.pow((clearing - m) as u32);
            // moving X^m from slot `pos` to the end
            let signed = if (ell - 1 - pos) % 2 == 1 { -moved } else { moved };
            acc[(m % 2) as usize].entry(j).or_default().push(signed);
        }
    }
    for (par, map) in acc.into_iter().enumerate() {
        for (j, ps) in map {
            let s = ps.into_iter().fold(MPoly::zero(&target), |a, b| &a + &b);
            if !s.is_zero() {
                if par == 0 {
                    out.even_part.insert(j, s);
                } else {
                    out.odd_part.insert(j, s);
                }
            }
        }
    }
    Ok(out)
}

/// Membership in `U_{N,l}`: an element of `wedge^l H` with vanishing residues.
pub fn in_u(p: &WedgeElement) -> Result<bool> {
    if !p.fits_h() {
        return Ok(false);
    }
    if p.is_zero() || p.ell() == 0 {
        return Ok(true);
    }
    Ok(residue_components(p)?.is_zero())
}

/// Rows: candidate basis; columns: increasing index tuples.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    pub vars: usize,
    pub ell: usize,
    pub rows: Vec<BasisIndex>,
    pub cols: Vec<Vec<u16>>,
    pub entries: Vec<Vec<MPoly>>,
}

pub fn basis_matrix(vars: usize, ell: usize) -> Result<BasisMatrix> {
    let fam = family(vars);
    let basis = fam.enumerate_basis(ell)?;
    let cols = column_tuples(vars, ell);
    let mut rows = Vec::with_capacity(basis.len());
    let mut entries = Vec::with_capacity(basis.len());
    for (idx, w) in basis {
        let row: Vec<MPoly> = cols
            .iter()
            .map(|t| w.terms().get(t).cloned().unwrap_or_else(|| MPoly::zero(fam.space())))
            .collect();
        rows.push(idx);
        entries.push(row);
    }
    Ok(BasisMatrix { vars, ell, rows, cols, entries })
}

/// The `n x n` block `(P_{i,j})` (even case).
pub fn p_block(vars: usize) -> Result<Vec<Vec<MPoly>>> {
    let fam = family(vars);
    if fam.parity() == Parity::Odd {
        return Err(Error::Arity("the P block is defined for an even number of variables".into()));
    }
    let n = fam.half() as i64;
    (1..=n).map(|i| (1..=n).map(|j| fam.p(i, j)).collect()).collect()
}

/// Sign of the row and column permutation that brings `X^{(2n,1)}` into
/// block form: rows `v_1..v_n, w_1..w_n`, columns `X^0, X^2, .., X^1, X^3, ..`.
/// In that order the matrix is `diag(P, P)`.
pub fn block_order_sign(vars: usize) -> Result<i32> {
    if vars % 2 == 1 {
        return Err(Error::Arity("block form is defined for an even number of variables".into()));
    }
    let m = basis_matrix(vars, 1)?;
    let row_key = |b: &BasisIndex| match (b.i.first(), b.j.first()) {
        (Some(&i), None) => i as usize,
        (None, Some(&j)) => vars / 2 + j as usize,
        _ => usize::MAX,
    };
    let mut rows: Vec<usize> = m.rows.iter().map(row_key).collect();
    let mut cols: Vec<usize> = m.cols.iter().map(|t| (t[0] as usize % 2) * vars + t[0] as usize).collect();
    let r = crate::wedge::sort_sign(&mut rows).ok_or(Error::Index("repeated row".into()))?;
    let c = crate::wedge::sort_sign(&mut cols).ok_or(Error::Index("repeated column".into()))?;
    Ok(r * c)
}

/// Exponent of `Delta^+` in the determinant identity.
pub fn delta_exponent(vars: usize, ell: usize) -> u32 {
    let (v, l) = (vars as i64, ell as i64);
    (binomial(v - 1, l - 1) + binomial(v - 2, l - 1)) as u32
}

/// Closed form of the total degree of `det X^{(N,l)}`.
pub fn det_degree(vars: usize, ell: usize) -> u128 {
    binomial(vars as i64, 2) * delta_exponent(vars, ell) as u128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetMode {
    Symbolic,
    Randomized,
}

/// Outcome of comparing `det X^{(N,l)}` with `c (Delta^+)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetReport {
    pub n: usize,
    pub ell: usize,
    pub mode: DetMode,
    pub matches: bool,
    #[serde(with = "rational_string")]
    pub c: BigRational,
    pub exponent: u32,
    pub trials: usize,
    pub degree: u128,
    pub degree_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub fn format_rational(q: &BigRational) -> String {
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    pub fn parse_rational(s: &str) -> Result<BigRational, String> {
        let bad = || format!("bad rational {s:?}");
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
            Some((a, b)) => {
                let b: num_bigint::BigInt = b.trim().parse().map_err(|_| bad())?;
                if b == num_bigint::BigInt::from(0) {
                    return Err(bad());
                }
                Ok(BigRational::new(a.trim().parse().map_err(|_| bad())?, b))
            }
        }
    }
}

/// Symbolic check: exact determinant, exact division by `(Delta^+)^k`.
pub fn det_identity_symbolic(vars: usize, ell: usize) -> Result<DetReport> {
    let m = basis_matrix(vars, ell)?;
    let det = bareiss_det(m.entries)?;
    let k = delta_exponent(vars, ell);
    let degree = det_degree(vars, ell);
    let degree_ok = det.homogeneous_degree() == Some(degree as i64);
    let delta = delta_plus_e(vars).pow(k);
    let (matches, c) = match det.div_exact(&delta) {
        Ok(q) => match q.constant_value() {
            Some(c) if !c.is_zero() => (true, BigRational::from_integer(c)),
            _ => (false, BigRational::zero()),
        },
        Err(_) => (false, BigRational::zero()),
    };
    Ok(DetReport { n: vars, ell, mode: DetMode::Symbolic, matches, c, exponent: k, trials: 0, degree, degree_ok, seed: None })
}

/// Bound on the sampled integer coordinates.
pub const SAMPLE_BOUND: i64 = 1_000_000;

/// Randomized check at seeded integer points.
pub fn det_identity_randomized(vars: usize, ell: usize, trials: usize, seed: u64) -> Result<DetReport> {
    let trials = trials.max(8);
    let m = basis_matrix(vars, ell)?;
    let k = delta_exponent(vars, ell);
    let degree = det_degree(vars, ell);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eval_at = |x: &[BigInt]| -> Result<(BigInt, BigInt)> {
        let e = elementary_values(x);
        let num: Vec<Vec<BigInt>> = m
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval_int(&e)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let det = bareiss_det(num)?;
        let mut delta = BigInt::one();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                delta *= &x[i] + &x[j];
            }
        }
        Ok((det, delta))
    };
    let mut c: Option<BigRational> = None;
    let mut matches = true;
    let mut done = 0;
    let mut attempts = 0;
    let mut degree_ok = true;
    while done < trials {
        attempts += 1;
        if attempts > 100 * trials {
            return Err(Error::Degenerate);
        }
        let x: Vec<BigInt> = (0..vars).map(|_| BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND))).collect();
        let (det, delta) = eval_at(&x)?;
        if delta.is_zero() {
            continue;
        }
        let ratio = BigRational::new(det, num_traits::pow(delta, k as usize));
        match &c {
            None => {
                // homogeneity: det(2x) = 2^d det(x)
                let x2: Vec<BigInt> = x.iter().map(|v| v * 2).collect();
                let (det2, _) = eval_at(&x2)?;
                let (det1, _) = eval_at(&x)?;
                degree_ok = det2 == det1 * num_traits::pow(BigInt::from(2), degree as usize);
                c = Some(ratio);
            }
            Some(c0) => {
                if *c0 != ratio {
                    matches = false;
                }
            }
        }
        done += 1;
    }
    let c = c.unwrap();
    if c.is_zero() {
        matches = false;
    }
    Ok(DetReport { n: vars, ell, mode: DetMode::Randomized, matches, c, exponent: k, trials, degree, degree_ok, seed: Some(seed) })
}

pub fn det_identity_check(vars: usize, ell: usize, mode: DetMode, trials: usize, seed: u64) -> Result<DetReport> {
    check_budget(vars)?;
    match mode {
        DetMode::Symbolic => det_identity_symbolic(vars, ell),
        DetMode::Randomized => det_identity_randomized(vars, ell, trials, seed),
    }
}

/// Result of the degree-sum comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSum {
    pub vars: usize,
    pub ell: usize,
    pub direct: i64,
    pub closed: i64,
}

impl DegreeSum {
    pub fn ok(&self) -> bool {
        self.direct == self.closed
    }
}

/// Sum of the basis degrees plus the column-degree sum, against the closed form.
pub fn degree_sum_check(vars: usize, ell: usize) -> DegreeSum {
    let parity = Parity::of(vars);
    let rows: i64 = basis_indices(vars, ell).iter().map(|b| b.deg1(parity)).sum();
    let cols: i64 = column_tuples(vars, ell).iter().map(|t| t.iter().map(|&s| s as i64).sum::<i64>()).sum();
    DegreeSum { vars, ell, direct: rows + cols, closed: det_degree(vars, ell) as i64 }
}

/// `P = (1/denominator) sum_r numerators[r] Q_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    pub rows: Vec<BasisIndex>,
    pub denominator: BigInt,
    pub numerators: Vec<MPoly>,
}

impl Coordinates {
    /// Rebuilds `denominator * P` from the coordinates.
    pub fn recombine(&self, vars: usize) -> Result<WedgeElement> {
        let fam = family(vars);
        let ell = self.rows.first().map_or(0, |r| r.ell());
        let mut acc = WedgeElement::zero(vars, ell, fam.space());
        for (idx, s) in self.rows.iter().zip(&self.numerators) {
            if !s.is_zero() {
                acc = acc.add(&fam.basis_element(idx)?.scale(s))?;
            }
        }
        Ok(acc)
    }
}

/// Monomials in `e_1..e_N` of weighted degree `d`.
pub fn e_monomials(vars: usize, d: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut cur = vec![0u16; vars];
    fn rec(k: usize, left: i64, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if k == 0 {
            if left == 0 {
                out.push(Mono(cur.iter().copied().collect()));
            }
            return;
        }
        let w = k as i64;
        let mut a = 0;
        while a * w <= left {
            cur[k - 1] = a as u16;
            rec(k - 1, left - a * w, cur, out);
            a += 1;
        }
        cur[k - 1] = 0;
    }
    rec(vars, d, &mut cur, &mut out);
    out
}

/// Sparse coordinates of a wedge element over `(tuple, monomial)` keys.
pub(crate) fn flatten(
    w: &WedgeElement,
    mult: Option<&Mono>,
    keys: &mut HashMap<(Vec<u16>, Mono), usize>,
) -> BTreeMap<usize, BigInt> {
    let mut out = BTreeMap::new();
    for (t, c) in w.terms() {
        for (m, a) in c.terms() {
            let m = match mult {
                Some(mu) => m.mul(mu),
                None => m.clone(),
            };
            let next = keys.len();
            let id = *keys.entry((t.clone(), m)).or_insert(next);
            out.insert(id, a.clone());
        }
    }
    out
}

/// Coordinates in the candidate basis by solving one rational linear
/// system per `deg_1` slice.
pub fn coordinates(p: &WedgeElement) -> Result<Coordinates> {
    if !in_u(p)? {
        return Err(Error::NotInU);
    }
    let vars = p.vars();
    let fam = family(vars);
    let parity = fam.parity();
    let basis = fam.enumerate_basis(p.ell())?;
    let rows: Vec<BasisIndex> = basis.iter().map(|(b, _)| b.clone()).collect();
    let mut numer: Vec<BTreeMap<Mono, BigRational>> = vec![BTreeMap::new(); basis.len()];
    for (d, part) in p.homogeneous_parts() {
        let mut keys = HashMap::new();
        let target = flatten(&part, None, &mut keys);
        let mut unknowns: Vec<(usize, Mono)> = Vec::new();
        let mut cols: Vec<BTreeMap<usize, BigInt>> = Vec::new();
        for (r, (idx, q)) in basis.iter().enumerate() {
            for mu in e_monomials(vars, d - idx.deg1(parity)) {
                cols.push(flatten(q, Some(&mu), &mut keys));
                unknowns.push((r, mu));
            }
        }
        let neq = keys.len();
        let dense = |v: &BTreeMap<usize, BigInt>| {
            let mut out = vec![BigRational::zero(); neq];
            for (&i, a) in v {
                out[i] = BigRational::from_integer(a.clone());
            }
            out
        };
        let cols_d: Vec<Vec<BigRational>> = cols.iter().map(dense).collect();
        let y = solve_columns(&cols_d, &dense(&target))?.ok_or(Error::OutsideSpan)?;
        for ((r, mu), v) in unknowns.into_iter().zip(y) {
            if !v.is_zero() {
                numer[r].insert(mu, v);
            }
        }
    }
    let mut den = BigInt::one();
    for m in &numer {
        for v in m.values() {
            den = num_integer::Integer::lcm(&den, v.denom());
        }
    }
    let numerators = numer
        .into_iter()
        .map(|m| {
            MPoly::from_terms(fam.space(), m.into_iter().map(|(mu, v)| (mu, (v * &den).to_integer())))
        })
        .collect();
    Ok(Coordinates { rows, denominator: den, numerators })
}

/// Coordinates by Cramer's rule with exact division by `(Delta^+)^k`.
pub fn coordinates_cramer(p: &WedgeElement) -> Result<Coordinates> {
    if !in_u(p)? {
        return Err(Error::NotInU);
    }
    let vars = p.vars();
    let ell = p.ell();
    let m = basis_matrix(vars, ell)?;
    let k = delta_exponent(vars, ell);
    let delta = delta_plus_e(vars).pow(k);
    let det = bareiss_det(m.entries.clone())?;
    let c = det.div_exact(&delta)?.constant_value().ok_or(Error::NotExact)?;
    if c.is_zero() {
        return Err(Error::NotExact);
    }
    let prow: Vec<MPoly> = m.cols.iter().map(|t| p.coefficient(t)).collect::<Result<_>>()?;
    let mut numerators = Vec::with_capacity(m.rows.len());
    for r in 0..m.rows.len() {
        let mut mr = m.entries.clone();
        mr[r] = prow.clone();
        numerators.push(bareiss_det(mr)?.div_exact(&delta)?);
    }
    let (den, numerators) = normalize_denominator(c, numerators);
    Ok(Coordinates { rows: m.rows, denominator: den, numerators })
}

fn normalize_denominator(c: BigInt, numerators: Vec<MPoly>) -> (BigInt, Vec<MPoly>) {
    let g = numerators.iter().fold(c.clone(), |g, p| num_integer::Integer::gcd(&g, &p.content()));
    let mut den = &c / &g;
    let mut nums: Vec<MPoly> = numerators.iter().map(|p| p.div_scalar(&g).unwrap()).collect();
    if den.is_negative() {
        den = -den;
        nums = nums.into_iter().map(|p| -p).collect();
    }
    (den, nums)
}

/// The generator used for the first component of the resolution maps.
pub fn first_generator(vars: usize) -> Result<Arc<WedgeElement>> {
    let fam = family(vars);
    match fam.parity() {
        Parity::Even => fam.generator(Kind::W, 1),
        Parity::Odd => fam.generator(Kind::V0, 0),
    }
}
