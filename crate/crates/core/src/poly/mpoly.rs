use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::space::{same_space, Space, Symbol};
use crate::{Error, Result};

pub type Exps = SmallVec<[u16; 10]>;

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Exps);

impl Mono {
    pub fn one(len: usize) -> Mono {
        Mono(SmallVec::from_elem(0, len))
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with big-integer coefficients.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, Debug)]
pub struct MPoly {
    space: Arc<Space>,
    terms: Vec<(Mono, BigInt)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(space: &Arc<Space>) -> MPoly {
        MPoly { space: space.clone(), terms: Vec::new() }
    }

    pub fn constant(space: &Arc<Space>, c: impl Into<BigInt>) -> MPoly {
        let c = c.into();
        let terms = if c.is_zero() { Vec::new() } else { vec![(Mono::one(space.len()), c)] };
        MPoly { space: space.clone(), terms }
    }

    pub fn one(space: &Arc<Space>) -> MPoly {
        Self::constant(space, 1)
    }

    /// The polynomial consisting of the single symbol `sym`.
    pub fn symbol(space: &Arc<Space>, sym: &Symbol) -> MPoly {
        let i = space
            .position(sym)
            .unwrap_or_else(|| panic!("symbol {sym} not in space"));
        Self::var(space, i)
    }

    /// The `i`-th symbol of the space.
    pub fn var(space: &Arc<Space>, i: usize) -> MPoly {
        let mut m = Mono::one(space.len());
        m.0[i] = 1;
        MPoly { space: space.clone(), terms: vec![(m, BigInt::one())] }
    }

    pub fn monomial(space: &Arc<Space>, exps: &[u16], c: impl Into<BigInt>) -> MPoly {
        assert_eq!(exps.len(), space.len(), "exponent length mismatch");
        let c = c.into();
        if c.is_zero() {
            return Self::zero(space);
        }
        MPoly { space: space.clone(), terms: vec![(Mono(exps.iter().copied().collect()), c)] }
    }

    /// Builds from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(space: &Arc<Space>, terms: impl IntoIterator<Item = (Mono, BigInt)>) -> MPoly {
        let mut acc: HashMap<Mono, BigInt> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), space.len(), "exponent length mismatch");
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(space, acc)
    }

    fn from_map(space: &Arc<Space>, acc: HashMap<Mono, BigInt>) -> MPoly {
        let mut terms: Vec<(Mono, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { space: space.clone(), terms }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.total() == 0 && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.total() == 0 => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, BigInt)> {
        self.terms.first()
    }

    fn check(&self, other: &MPoly) {
        assert!(
            same_space(&self.space, &other.space),
            "polynomials live in different spaces: {:?} vs {:?}",
            self.space.symbols,
            other.space.symbols
        );
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`; fails unless all are divisible.
    pub fn div_scalar(&self, c: &BigInt) -> Result<MPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return Err(Error::NotExact);
            }
            terms.push((m.clone(), q));
        }
        Ok(MPoly { space: self.space.clone(), terms })
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        self.check(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MPoly { space: self.space.clone(), terms: out }
    }

    fn product(&self, other: &MPoly) -> MPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.space);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_mono(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_mono(m, c);
        }
        let mut acc: HashMap<Mono, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                match acc.get_mut(&m) {
                    Some(v) => *v += c1 * c2,
                    None => {
                        acc.insert(m, c1 * c2);
                    }
                }
            }
        }
        Self::from_map(&self.space, acc)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = Self::one(&self.space);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact division; fails if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Result<MPoly> {
        self.check(divisor);
        if divisor.is_zero() {
            return Err(Error::NotExact);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.space));
        }
        if let Some(c) = divisor.constant_value() {
            return self.div_scalar(&c);
        }
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem: BTreeMap<Mono, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return Err(Error::NotExact);
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return Err(Error::NotExact);
            }
            let qm = m.div(&lm);
            for (dm, dc) in &divisor.terms[1..] {
                let t = dm.mul(&qm);
                let v = rem.entry(t.clone()).or_insert_with(BigInt::zero);
                *v -= &qc * dc;
                if v.is_zero() {
                    rem.remove(&t);
                }
            }
            quot.push((qm, qc));
        }
        // quotient terms were produced in descending order
        Ok(MPoly { space: self.space.clone(), terms: quot })
    }

    /// Weighted x-degree of each term; `None` for the zero polynomial.
    pub fn x_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        let w: Vec<i64> = self.space.symbols.iter().map(|s| s.x_degree()).collect();
        self.terms
            .iter()
            .map(move |(m, _)| m.0.iter().zip(w.iter()).map(|(&e, &d)| e as i64 * d).sum())
    }

    /// The common x-degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.x_degrees();
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn max_degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0)
    }

    /// Re-expresses the polynomial in a space containing all of its symbols.
    pub fn lift(&self, target: &Arc<Space>) -> Result<MPoly> {
        if same_space(&self.space, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.space.len());
        for (i, s) in self.space.symbols.iter().enumerate() {
            match target.position(s) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.iter().any(|(m, _)| m.0[i] != 0) {
                        return Err(Error::Arity(format!("symbol {s} missing from target space")));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Mono::one(target.len());
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e.0[j] += k;
                }
            }
            (e, c.clone())
        });
        Ok(Self::from_terms(target, terms))
    }

    /// Ring homomorphism sending the `i`-th symbol to `images[i]`.
    pub fn substitute(&self, images: &[MPoly], target: &Arc<Space>) -> MPoly {
        assert_eq!(images.len(), self.space.len());
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(target), p.clone()]).collect();
        let mut acc = Self::zero(target);
        // group terms by their non-first exponents to share partial products
        let mut buckets: HashMap<&[u16], Vec<(u16, &BigInt)>> = HashMap::new();
        for (m, c) in &self.terms {
            buckets.entry(&m.0[1.min(m.0.len())..]).or_default().push((m.0.first().copied().unwrap_or(0), c));
        }
        let mut keys: Vec<&[u16]> = buckets.keys().copied().collect();
        keys.sort();
        for key in keys {
            let mut rest = Self::one(target);
            for (i, &k) in key.iter().enumerate() {
                if k > 0 {
                    rest = &rest * power_cached(&mut cache[i + 1], k);
                }
            }
            let mut inner = Self::zero(target);
            for &(k0, c) in &buckets[key] {
                let p = if self.space.is_empty() {
                    Self::one(target)
                } else {
                    power_cached(&mut cache[0], k0).clone()
                };
                inner = &inner + &p.scale(c);
            }
            acc = &acc + &(&inner * &rest);
        }
        acc
    }

    /// Substitutes integer values for all symbols.
    pub fn eval_int(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.space.len() {
            return Err(Error::Arity(format!("point has {} entries, space has {}", point.len(), self.space.len())));
        }
        let mut pows: Vec<HashMap<u16, BigInt>> = vec![HashMap::new(); point.len()];
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = pows[i].entry(k).or_insert_with(|| num_traits::pow(point[i].clone(), k as usize));
                t *= &*p;
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes rational values for all symbols.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.space.len() {
            return Err(Error::Arity(format!("point has {} entries, space has {}", point.len(), self.space.len())));
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes values for some symbols, dropping them from the space.
    pub fn specialize(&self, assignment: &[(Symbol, BigRational)]) -> Result<MPoly> {
        let mut vals: Vec<Option<&BigRational>> = vec![None; self.space.len()];
        for (s, v) in assignment {
            if let Some(i) = self.space.position(s) {
                vals[i] = Some(v);
            }
        }
        let kept: Vec<Symbol> = self
            .space
            .symbols
            .iter()
            .zip(vals.iter())
            .filter(|(_, v)| v.is_none())
            .map(|(s, _)| s.clone())
            .collect();
        let arity = kept
            .iter()
            .filter_map(|s| match s {
                Symbol::E(k) | Symbol::Var(k) => Some(*k as usize),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let target = Arc::new(Space { rep: self.space.rep, arity, symbols: kept });
        let mut acc: HashMap<Mono, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            let mut e = Mono::one(target.len());
            let mut j = 0;
            for (i, &k) in m.0.iter().enumerate() {
                match vals[i] {
                    Some(v) => {
                        if k > 0 {
                            t *= num_traits::pow(v.clone(), k as usize);
                        }
                    }
                    None => {
                        e.0[j] = k;
                        j += 1;
                    }
                }
            }
            *acc.entry(e).or_insert_with(BigRational::zero) += t;
        }
        let mut terms = Vec::new();
        for (m, c) in acc {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return Err(Error::NonIntegral);
            }
            terms.push((m, c.to_integer()));
        }
        Ok(Self::from_terms(&target, terms))
    }

    /// Splits off the trailing `k` symbols: returns a map from their
    /// exponents to the coefficient polynomial in the remaining symbols.
    pub fn split_trailing(&self, k: usize) -> BTreeMap<Vec<u16>, MPoly> {
        let n = self.space.len() - k;
        let base = Arc::new(Space {
            rep: self.space.rep,
            arity: self.space.arity,
            symbols: self.space.symbols[..n].to_vec(),
        });
        let mut groups: BTreeMap<Vec<u16>, Vec<(Mono, BigInt)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.0[n..].to_vec())
                .or_default()
                .push((Mono(m.0[..n].iter().copied().collect()), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| {
                let mut ts = ts;
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                (k, MPoly { space: base.clone(), terms: ts })
            })
            .collect()
    }

    /// Maximum absolute coefficient, as f64 bit-length (for diagnostics).
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.abs().bits()).max().unwrap_or(0)
    }
}

fn power_cached(cache: &mut Vec<MPoly>, k: u16) -> &MPoly {
    while cache.len() <= k as usize {
        let next = &cache[cache.len() - 1] * &cache[1];
        cache.push(next);
    }
    &cache[k as usize]
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let s = self.space.symbols[i].name();
                    if e == 1 {
                        s
                    } else {
                        format!("{s}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                $body(self, rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &MPoly, b: &MPoly| a.merge(b, false));
binop!(Sub, sub, |a: &MPoly, b: &MPoly| a.merge(b, true));
binop!(Mul, mul, |a: &MPoly, b: &MPoly| a.product(b));

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        *self = self.merge(rhs, true);
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
