//! q-series: exact q-polynomials, truncated series with a rational leading
//! offset, Laurent polynomials in `z` over such series, and the character
//! and branching formulas built from them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::nullres::rational_string;
use crate::{Error, Result};

/// An exact polynomial in `q`; `coeffs[i]` multiplies `q^i`, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPoly(#[serde(with = "int_list")] Vec<BigInt>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigInt::one()])
    }

    pub fn monomial(e: usize, c: impl Into<BigInt>) -> Self {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = c.into();
        QPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<BigInt>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        QPoly(v)
    }

    pub fn from_i64(v: &[i64]) -> Self {
        QPoly::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(v)
    }

    /// Multiplication by `q^k`; a negative shift must not drop nonzero terms.
    pub fn shift(&self, k: i64) -> Result<QPoly> {
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        if k >= 0 {
            let mut v = vec![BigInt::zero(); k as usize];
            v.extend(self.0.iter().cloned());
            Ok(QPoly(v))
        } else {
            let k = (-k) as usize;
            if self.0.iter().take(k).any(|c| !c.is_zero()) {
                return Err(Error::Index(format!("q^{} leaves the polynomial ring", -(k as i64))));
            }
            Ok(QPoly::from_coeffs(self.0[k.min(self.0.len())..].to_vec()))
        }
    }

    /// `p(q) -> p(q^k)`.
    pub fn dilate(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigInt::zero(); (self.0.len() - 1) * k + 1];
        for (i, c) in self.0.iter().enumerate() {
            v[i * k] = c.clone();
        }
        QPoly(v)
    }

    /// `[m]_{q^k} = 1 - q^{km}`.
    pub fn bracket(m: usize, k: usize) -> QPoly {
        QPoly::one().sub(&QPoly::monomial(m * k, 1))
    }

    pub fn eval_one(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0.iter().enumerate().map(|(i, c)| (BigRational::from_integer(i.into()), c)))
    }
}

fn write_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (BigRational, &'a BigInt)>) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let a = c.abs();
        let es = rational_string::format_rational(&e);
        match (e.is_zero(), a.is_one()) {
            (true, _) => write!(f, "{a}")?,
            (false, true) if e.is_one() => write!(f, "q")?,
            (false, true) => write!(f, "q^{es}")?,
            (false, false) if e.is_one() => write!(f, "{a}q")?,
            (false, false) => write!(f, "{a}q^{es}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Base of a q-binomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    Q,
    Q2,
}

impl Base {
    fn step(self) -> usize {
        match self {
            Base::Q => 1,
            Base::Q2 => 2,
        }
    }
}

/// Gaussian binomial through the first Pascal recursion.
pub fn qbinom_rec1(m: i64, r: i64, base: Base) -> QPoly {
    qbinom_table(m, base, true).remove(&(m, r)).unwrap_or_default()
}

/// Gaussian binomial through the second Pascal recursion.
pub fn qbinom_rec2(m: i64, r: i64, base: Base) -> QPoly {
    qbinom_table(m, base, false).remove(&(m, r)).unwrap_or_default()
}

fn qbinom_table(m: i64, base: Base, first: bool) -> BTreeMap<(i64, i64), QPoly> {
    let k = base.step() as i64;
    let mut t: BTreeMap<(i64, i64), QPoly> = BTreeMap::new();
    if m < 0 {
        return t;
    }
    t.insert((0, 0), QPoly::one());
    for mm in 1..=m {
        for r in 0..=mm {
            let a = t.get(&(mm - 1, r)).cloned().unwrap_or_default();
            let b = t.get(&(mm - 1, r - 1)).cloned().unwrap_or_default();
            let v = if first {
                a.add(&b.shift(k * (mm - r)).unwrap())
            } else {
                a.shift(k * r).unwrap().add(&b)
            };
            t.insert((mm, r), v);
        }
    }
    t
}

/// `[m choose r]` in base `q` or `q^2`; zero outside `0 <= r <= m`.
pub fn qbinom(m: i64, r: i64, base: Base) -> QPoly {
    if m < 0 || r < 0 || r > m {
        return QPoly::zero();
    }
    cached_qbinom(m as usize, r as usize).dilate(base.step())
}

fn cached_qbinom(m: usize, r: usize) -> QPoly {
    use std::sync::{Mutex, OnceLock};
    static ROWS: OnceLock<Mutex<Vec<Vec<QPoly>>>> = OnceLock::new();
    let rows = ROWS.get_or_init(|| Mutex::new(vec![vec![QPoly::one()]]));
    let mut rows = rows.lock().unwrap();
    while rows.len() <= m {
        let prev = rows.last().unwrap().clone();
        let mm = prev.len();
        let row: Vec<QPoly> = (0..=mm)
            .map(|r| {
                let a = prev.get(r).cloned().unwrap_or_default();
                let b = if r == 0 { QPoly::zero() } else { prev[r - 1].clone() };
                a.add(&b.shift((mm - r) as i64).unwrap())
            })
            .collect();
        rows.push(row);
    }
    rows[m][r].clone()
}

/// q^2-tetranomial `[n; l1, l2, l3]`; zero if any part is negative.
pub fn qtetra(n: i64, l1: i64, l2: i64, l3: i64) -> QPoly {
    if l1 < 0 || l2 < 0 || l3 < 0 || l1 + l2 + l3 > n {
        return QPoly::zero();
    }
    qbinom(n, l1, Base::Q2).mul(&qbinom(n - l1, l2, Base::Q2)).mul(&qbinom(n - l1 - l2, l3, Base::Q2))
}

/// Left side of the tetranomial identity, `[2n choose l]_q`.
pub fn tetra_lhs(n: i64, ell: i64) -> QPoly {
    qbinom(2 * n, ell, Base::Q)
}

/// Right side: `sum_{l1+l2+2l3=l} q^{l1^2 + l2(l2-1)} [n; l1, l2, l3]`.
pub fn tetra_rhs(n: i64, ell: i64) -> QPoly {
    let mut acc = QPoly::zero();
    if ell < 0 {
        return acc;
    }
    for l3 in 0..=ell / 2 {
        for l1 in 0..=ell - 2 * l3 {
            let l2 = ell - 2 * l3 - l1;
            let t = qtetra(n, l1, l2, l3);
            if !t.is_zero() {
                acc = acc.add(&t.shift(l1 * l1 + l2 * (l2 - 1)).unwrap());
            }
        }
    }
    acc
}

/// `a_{n,l} = a_{n-1,l} + (q^{2n-l-1} + q^{2n-1}) a_{n-1,l-1} + q^{2n-l} a_{n-1,l-2}`.
pub fn recursion_holds(f: impl Fn(i64, i64) -> QPoly, n: i64, ell: i64) -> bool {
    let shifted = |p: QPoly, k: i64| p.shift(k);
    let rhs = (|| -> Result<QPoly> {
        let b = f(n - 1, ell - 1);
        Ok(f(n - 1, ell)
            .add(&shifted(b.clone(), 2 * n - ell - 1)?)
            .add(&shifted(b, 2 * n - 1)?)
            .add(&shifted(f(n - 1, ell - 2), 2 * n - ell)?))
    })();
    matches!(rhs, Ok(r) if r == f(n, ell))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TetraReport {
    pub n: i64,
    pub identity: bool,
    pub lhs_recursion: bool,
    pub rhs_recursion: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failing_ell: Option<i64>,
}

impl TetraReport {
    pub fn ok(&self) -> bool {
        self.identity && self.lhs_recursion && self.rhs_recursion
    }
}

/// Checks both sides for every `0 <= l <= 2n + 2` and the shared recursion.
pub fn verify_tetranomial(n: i64) -> TetraReport {
    let mut rep = TetraReport { n, identity: true, lhs_recursion: true, rhs_recursion: true, failing_ell: None };
    for ell in 0..=2 * n + 2 {
        if tetra_lhs(n, ell) != tetra_rhs(n, ell) {
            rep.identity = false;
            rep.failing_ell.get_or_insert(ell);
        }
        if n >= 1 {
            if !recursion_holds(tetra_lhs, n, ell) {
                rep.lhs_recursion = false;
                rep.failing_ell.get_or_insert(ell);
            }
            if !recursion_holds(tetra_rhs, n, ell) {
                rep.rhs_recursion = false;
                rep.failing_ell.get_or_insert(ell);
            }
        }
    }
    rep
}

/// Integers as JSON numbers when they fit in `i64`, decimal strings otherwise.
pub mod int_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Int {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<Int> = v.iter().map(|x| i64::try_from(x).map_or_else(|_| Int::Big(x.to_string()), Int::Small)).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Int>::deserialize(d)?
            .into_iter()
            .map(|x| match x {
                Int::Small(i) => Ok(BigInt::from(i)),
                Int::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

/// A truncated series `q^offset * sum_{i <= cutoff} coeffs[i] q^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    #[serde(with = "rational_string")]
    pub offset: BigRational,
    pub cutoff: usize,
    #[serde(with = "int_list")]
    pub coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(offset: BigRational, cutoff: usize) -> Self {
        QSeries { offset, cutoff, coeffs: vec![BigInt::zero(); cutoff + 1] }
    }

    pub fn one(cutoff: usize) -> Self {
        QSeries::from_poly(&QPoly::one(), BigRational::zero(), cutoff)
    }

    pub fn from_poly(p: &QPoly, offset: BigRational, cutoff: usize) -> Self {
        QSeries { offset, cutoff, coeffs: (0..=cutoff).map(|i| p.coeff(i)).collect() }
    }

    pub fn from_i64(offset: BigRational, coeffs: &[i64]) -> Self {
        QSeries { offset, cutoff: coeffs.len() - 1, coeffs: coeffs.iter().map(|&c| c.into()).collect() }
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Highest known exponent.
    pub fn horizon(&self) -> BigRational {
        &self.offset + BigRational::from_integer(self.cutoff.into())
    }

    /// Keeps only exponents up to `offset + cutoff`.
    pub fn truncate(&self, cutoff: usize) -> Self {
        let c = cutoff.min(self.cutoff);
        QSeries { offset: self.offset.clone(), cutoff: c, coeffs: self.coeffs[..=c].to_vec() }
    }

    /// Re-expresses the series from a lower offset that differs by an integer.
    pub fn lower_to(&self, offset: &BigRational) -> Result<Self> {
        let d = &self.offset - offset;
        if !d.is_integer() || d.is_negative() {
            return Err(Error::Index(format!(
                "cannot move offset {} to {}",
                rational_string::format_rational(&self.offset),
                rational_string::format_rational(offset)
            )));
        }
        let d = d.to_integer().to_usize().unwrap();
        let mut coeffs = vec![BigInt::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Ok(QSeries { offset: offset.clone(), cutoff: self.cutoff + d, coeffs })
    }

    fn aligned(&self, o: &Self) -> Result<(Self, Self)> {
        let off = if self.offset <= o.offset { self.offset.clone() } else { o.offset.clone() };
        let a = self.lower_to(&off)?;
        let b = o.lower_to(&off)?;
        let c = a.cutoff.min(b.cutoff);
        Ok((a.truncate(c), b.truncate(c)))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (mut a, b) = self.aligned(o)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(a)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QSeries { offset: self.offset.clone(), cutoff: self.cutoff, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = self.cutoff.min(o.cutoff);
        let mut out = vec![BigInt::zero(); c + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(c + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(c + 1 - i) {
                out[i + j] += a * b;
            }
        }
        QSeries { offset: &self.offset + &o.offset, cutoff: c, coeffs: out }
    }

    pub fn mul_poly(&self, p: &QPoly) -> Self {
        self.mul(&QSeries::from_poly(p, BigRational::zero(), self.cutoff))
    }

    /// Multiplies by `q^k` keeping the relative cutoff.
    pub fn shift_offset(&self, k: &BigRational) -> Self {
        QSeries { offset: &self.offset + k, ..self.clone() }
    }

    /// Division by `1 - q^j`.
    pub fn div_one_minus(&self, j: usize) -> Self {
        let mut out = self.clone();
        if j == 0 {
            panic!("division by zero series");
        }
        for i in j..=out.cutoff {
            let prev = out.coeffs[i - j].clone();
            out.coeffs[i] += prev;
        }
        out
    }

    /// Exact division by a series whose lowest coefficient is a unit.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let lead = o.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::Zero)?;
        if lead != 0 || !o.coeffs[0].abs().is_one() {
            return Err(Error::NotExact);
        }
        let c = self.cutoff.min(o.cutoff);
        let u = o.coeffs[0].clone();
        let mut out = vec![BigInt::zero(); c + 1];
        for i in 0..=c {
            let mut acc = self.coeffs[i].clone();
            for j in 1..=i {
                acc -= &o.coeffs[j] * &out[i - j];
            }
            out[i] = acc * &u;
        }
        Ok(QSeries { offset: &self.offset - &o.offset, cutoff: c, coeffs: out })
    }

    /// Coefficient of `q^e` for an absolute exponent, if known.
    pub fn at(&self, e: &BigRational) -> Option<BigInt> {
        let d = e - &self.offset;
        if !d.is_integer() {
            return Some(BigInt::zero()).filter(|_| d <= BigRational::from_integer(self.cutoff.into()));
        }
        if d.is_negative() {
            return Some(BigInt::zero());
        }
        d.to_integer().to_usize().and_then(|i| self.coeffs.get(i).cloned())
    }

    /// Equality of all coefficients both series know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        match self.aligned(o) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => self.is_zero() && o.is_zero(),
        }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs.iter().enumerate().map(|(i, c)| (&self.offset + BigRational::from_integer(i.into()), c)),
        )?;
        write!(f, " + O(q^{})", rational_string::format_rational(&(self.horizon() + BigRational::one())))
    }
}

/// `1/(q;q)_m` truncated.
pub fn inv_qfactorial(m: usize, cutoff: usize) -> QSeries {
    (1..=m).fold(QSeries::one(cutoff), |s, j| s.div_one_minus(j))
}

/// `1/(q;q)_infinity` truncated: the partition numbers.
pub fn inv_qpochhammer_inf(cutoff: usize) -> QSeries {
    inv_qfactorial(cutoff, cutoff)
}

/// `prod_{j >= 1} (1 + q^j)` truncated.
pub fn fermion_product(cutoff: usize) -> QSeries {
    let mut s = QSeries::one(cutoff);
    for j in 1..=cutoff {
        for i in (j..=cutoff).rev() {
            let prev = s.coeffs[i - j].clone();
            s.coeffs[i] += prev;
        }
    }
    s
}

fn quarter_square(m: i64) -> BigRational {
    BigRational::new((m * m).into(), 4.into())
}

/// `ch U_{N,l} = q^{N^2/4} [N choose l]_q / (q;q)_N`.
pub fn ch_u(vars: usize, ell: i64, cutoff: usize) -> QSeries {
    inv_qfactorial(vars, cutoff).mul_poly(&qbinom(vars as i64, ell, Base::Q)).shift_offset(&quarter_square(vars as i64))
}

/// `ch M_{N,l} = q^{N^2/4} ([N choose l]_q - [N choose l-1]_q) / (q;q)_N`.
pub fn ch_m(vars: usize, ell: i64, cutoff: usize) -> QSeries {
    let n = vars as i64;
    let diff = qbinom(n, ell, Base::Q).sub(&qbinom(n, ell - 1, Base::Q));
    inv_qfactorial(vars, cutoff).mul_poly(&diff).shift_offset(&quarter_square(n))
}

/// `ch U(l) - sum_r (-1)^r (ch U(l-1-r) + ch U(l-2-r))` against `ch M(l)`.
pub fn euler_characteristic_check(vars: usize, ell: i64, cutoff: usize) -> bool {
    let mut acc = ch_u(vars, ell, cutoff);
    for r in 0..ell {
        let t = ch_u(vars, ell - 1 - r, cutoff).add(&ch_u(vars, ell - 2 - r, cutoff)).unwrap();
        acc = if r % 2 == 0 { acc.sub(&t) } else { acc.add(&t) }.unwrap();
    }
    acc.agrees_with(&ch_m(vars, ell, cutoff))
}

/// Branching function of weight `lambda` in the level-one module `i`:
/// the sum of `ch M_{N,l}` over `N = i mod 2`, `N - 2l = lambda`.
/// `cutoff` counts powers of `q` above the leading `q^{lambda^2/4}`.
pub fn branching(i: u8, lambda: u32, cutoff: usize) -> Result<QSeries> {
    if lambda % 2 != (i % 2) as u32 || i > 1 {
        return Err(Error::Index(format!("weight {lambda} has the wrong parity for module {i}")));
    }
    let lam = lambda as i64;
    let base = quarter_square(lam);
    let mut acc = QSeries::zero(base.clone(), cutoff);
    let mut ell = 0i64;
    loop {
        let vars = lam + 2 * ell;
        // leading exponent relative to the base is l(N - l)
        if ell * (vars - ell) > cutoff as i64 {
            break;
        }
        let term = ch_m(vars as usize, ell, cutoff);
        acc = acc.add(&term.lower_to(&base)?.truncate(cutoff))?;
        ell += 1;
    }
    Ok(acc)
}

/// `q^{S^2} (1 - q^{2S+1}) / (q;q)_infinity` with `S = twice_spin / 2`.
pub fn virasoro_product(twice_spin: u32, cutoff: usize) -> QSeries {
    let m = twice_spin as usize;
    inv_qpochhammer_inf(cutoff).mul_poly(&QPoly::bracket(m + 1, 1)).shift_offset(&quarter_square(m as i64))
}

/// A Laurent polynomial in `z` with series coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZLaurent {
    pub terms: BTreeMap<i64, QSeries>,
}

impl ZLaurent {
    pub fn add_term(&mut self, zexp: i64, s: &QSeries) -> Result<()> {
        match self.terms.get_mut(&zexp) {
            Some(t) => *t = t.add(s)?,
            None => {
                self.terms.insert(zexp, s.clone());
            }
        }
        Ok(())
    }

    /// Coefficientwise comparison; absent entries count as zero.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let keys: std::collections::BTreeSet<i64> = self.terms.keys().chain(o.terms.keys()).copied().collect();
        keys.into_iter().all(|k| match (self.terms.get(&k), o.terms.get(&k)) {
            (Some(a), Some(b)) => a.agrees_with(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

/// `chi_S(z)` as exponents of `z`, `S = twice_spin / 2`.
pub fn sl2_character(twice_spin: u32) -> Vec<i64> {
    let m = twice_spin as i64;
    (0..=m).map(|k| m - 2 * k).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermionicReport {
    pub i: u8,
    pub cutoff: usize,
    pub z_range: i64,
    pub equal: bool,
    pub lhs: ZLaurent,
    pub rhs: ZLaurent,
}

/// Both sides of `sum_lambda chi_{lambda/2} ch M_lambda = sum_{N,l} z^{N-2l} q^{N^2/4} / ((q)_l (q)_{N-l})`,
/// with exponents of `q` up to `i/4 + cutoff` and `|z-exponent| <= z_range`.
pub fn fermionic_identity(i: u8, cutoff: usize, z_range: i64) -> Result<FermionicReport> {
    let base = quarter_square(i as i64);
    let mut lhs = ZLaurent::default();
    let mut lambda = i as i64;
    // chi_{lambda/2} ch M_lambda starts at q^{lambda^2/4}
    while quarter_square(lambda) - &base <= BigRational::from_integer(cutoff.into()) {
        let b = branching(i, lambda as u32, cutoff)?;
        let b = b.lower_to(&base)?.truncate(cutoff);
        for z in sl2_character(lambda as u32) {
            if z.abs() <= z_range {
                lhs.add_term(z, &b)?;
            }
        }
        lambda += 2;
    }
    let mut rhs = ZLaurent::default();
    let mut n = i as i64;
    while quarter_square(n) - &base <= BigRational::from_integer(cutoff.into()) {
        for ell in 0..=n {
            let z = n - 2 * ell;
            if z.abs() > z_range {
                continue;
            }
            let s = inv_qfactorial(ell as usize, cutoff)
                .mul(&inv_qfactorial((n - ell) as usize, cutoff))
                .shift_offset(&quarter_square(n))
                .lower_to(&base)?
                .truncate(cutoff);
            rhs.add_term(z, &s)?;
        }
        n += 2;
    }
    let equal = lhs.agrees_with(&rhs);
    Ok(FermionicReport { i, cutoff, z_range, equal, lhs, rhs })
}

/// `sum_{N = i mod 2} q^{N(N-1)/2} / (q;q)_N` truncated.
pub fn ising_char(i: u8, cutoff: usize) -> QSeries {
    let mut acc = QSeries::zero(BigRational::zero(), cutoff);
    let mut n = (i % 2) as usize;
    while n * n.saturating_sub(1) / 2 <= cutoff {
        let t = inv_qfactorial(n, cutoff).shift_offset(&BigRational::from_integer((n * n.saturating_sub(1) / 2).into()));
        acc = acc.add(&t.lower_to(&BigRational::zero()).unwrap().truncate(cutoff)).unwrap();
        n += 2;
    }
    acc
}

/// Does `ch M_{N,l}` have only non-negative coefficients up to the cutoff.
pub fn ch_m_nonnegative(vars: usize, ell: i64, cutoff: usize) -> bool {
    ch_m(vars, ell, cutoff).coeffs.iter().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0() -> BigRational {
        BigRational::zero()
    }

    #[test]
    fn small_binomials() {
        assert_eq!(qbinom(2, 1, Base::Q), QPoly::from_i64(&[1, 1]));
        assert_eq!(qbinom(4, 2, Base::Q), QPoly::from_i64(&[1, 1, 2, 1, 1]));
        assert_eq!(qbinom(4, 2, Base::Q2), QPoly::from_i64(&[1, 0, 1, 0, 2, 0, 1, 0, 1]));
        assert!(qbinom(3, 4, Base::Q).is_zero());
        assert!(qbinom(3, -1, Base::Q).is_zero());
    }

    #[test]
    fn recursions_agree() {
        for m in 0..=30 {
            for r in 0..=m {
                let a = qbinom_rec1(m, r, Base::Q);
                assert_eq!(a, qbinom_rec2(m, r, Base::Q));
                assert_eq!(a, qbinom(m, r, Base::Q));
            }
        }
        assert_eq!(qbinom_rec1(6, 2, Base::Q2), qbinom_rec2(6, 2, Base::Q2));
    }

    #[test]
    fn tetranomial_small() {
        assert_eq!(qtetra(1, 1, 0, 0), QPoly::one());
        assert!(qtetra(3, 1, -1, 1).is_zero());
        assert_eq!(tetra_lhs(1, 1), QPoly::from_i64(&[1, 1]));
        assert_eq!(tetra_rhs(1, 1), QPoly::from_i64(&[1, 1]));
        assert!(tetra_rhs(1, 3).is_zero());
        assert!(verify_tetranomial(3).ok());
    }

    #[test]
    fn characters() {
        // q / (1 - q)^2
        let u = ch_u(2, 1, 5);
        assert_eq!(u.offset, BigRational::one());
        assert_eq!(u.coeffs, (1..=6).map(BigInt::from).collect::<Vec<_>>());
        // q^2 / ((1 - q)(1 - q^2))
        let m = ch_m(2, 1, 4);
        assert_eq!(m.offset, BigRational::one());
        assert_eq!(m.coeffs, [0, 1, 1, 2, 2].map(BigInt::from).to_vec());
        assert_eq!(ch_u(3, 1, 3).offset, BigRational::new(9.into(), 4.into()));
    }

    #[test]
    fn branching_and_virasoro() {
        let b = branching(0, 0, 5).unwrap();
        assert_eq!(b, QSeries::from_i64(q0(), &[1, 0, 1, 1, 2, 2]));
        assert_eq!(virasoro_product(0, 5), b);
        assert!(branching(0, 2, 20).unwrap().agrees_with(&virasoro_product(2, 20)));
        assert_eq!(branching(1, 1, 3).unwrap().offset, BigRational::new(1.into(), 4.into()));
        assert!(branching(1, 2, 3).is_err());
    }

    #[test]
    fn series_division() {
        let a = QSeries::from_i64(q0(), &[1, -1, 0, 0]);
        let inv = QSeries::one(3).div(&a).unwrap();
        assert_eq!(inv.coeffs, vec![BigInt::one(); 4]);
        let b = QSeries::from_i64(q0(), &[2, 1, 0, 0]);
        assert!(QSeries::one(3).div(&b).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_i64(&[1, -2, 0, 1]).to_string(), "1 - 2q + q^3");
    }
}
