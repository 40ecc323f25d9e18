//! Exterior powers of `H^(n) = (+)_{j<n} R_n X^j`.
//!
//! A degree-`l` element is stored as a map from strictly increasing index
//! tuples `(i_1 < ... < i_l)` to E-REP coefficients; the tuple stands for
//! `X^{i_1} ^ ... ^ X^{i_l}`, i.e. the antisymmetrization of
//! `X_1^{i_1} ... X_l^{i_l}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::poly::{MPoly, PolyJson, Space};
use crate::{Error, Result};

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_sign<T: Ord>(idx: &mut [T]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort keeps the parity count simple
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeElement {
    vars: usize,
    widened: bool,
    ell: usize,
    space: Arc<Space>,
    terms: BTreeMap<Vec<u16>, MPoly>,
}

impl WedgeElement {
    pub fn zero(vars: usize, ell: usize, space: &Arc<Space>) -> Self {
        WedgeElement { vars, widened: false, ell, space: space.clone(), terms: BTreeMap::new() }
    }

    /// The unit of `wedge^0`, i.e. the constant `1` of `R_n`.
    pub fn unit(vars: usize, space: &Arc<Space>) -> Self {
        let mut w = Self::zero(vars, 0, space);
        w.terms.insert(Vec::new(), MPoly::one(space));
        w
    }

    /// `c * X^i` in degree one.
    pub fn basis1(vars: usize, space: &Arc<Space>, i: u16, c: MPoly) -> Result<Self> {
        let mut w = Self::zero(vars, 1, space);
        w.set_widened(i as usize >= vars);
        w.add_term(vec![i], c)?;
        Ok(w)
    }

    /// Builds from `(tuple, coefficient)` pairs in any order; tuples are
    /// sorted with sign and repeated indices dropped.
    pub fn from_terms(
        vars: usize,
        ell: usize,
        space: &Arc<Space>,
        widened: bool,
        terms: impl IntoIterator<Item = (Vec<u16>, MPoly)>,
    ) -> Result<Self> {
        let mut w = Self::zero(vars, ell, space);
        w.widened = widened;
        for (t, c) in terms {
            w.add_term(t, c)?;
        }
        Ok(w)
    }

    fn set_widened(&mut self, on: bool) {
        self.widened = on;
    }

    fn bound(&self) -> usize {
        if self.widened {
            self.vars + 1
        } else {
            self.vars
        }
    }

    /// Adds `c * X^{t}` where `t` need not be sorted.
    pub fn add_term(&mut self, mut t: Vec<u16>, c: MPoly) -> Result<()> {
        if t.len() != self.ell {
            return Err(Error::Arity(format!("tuple {t:?} in degree {}", self.ell)));
        }
        if let Some(&bad) = t.iter().find(|&&i| i as usize >= self.bound()) {
            return Err(Error::Index(format!("X^{bad} with {} variables", self.vars)));
        }
        if c.is_zero() {
            return Ok(());
        }
        let Some(sign) = sort_sign(&mut t) else {
            return Ok(());
        };
        let c = if sign < 0 { -c } else { c };
        match self.terms.remove(&t) {
            None => {
                self.terms.insert(t, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(t, s);
                }
            }
        }
        Ok(())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// True when some index may equal `vars` (scaffolding outside `H`).
    pub fn is_widened(&self) -> bool {
        self.widened
    }

    /// True when every index is below `vars`.
    pub fn fits_h(&self) -> bool {
        self.terms.keys().all(|t| t.iter().all(|&i| (i as usize) < self.vars))
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u16>, MPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Antisymmetric coefficient `P_{i_1...i_l}` for an arbitrary tuple.
    pub fn coefficient(&self, tuple: &[u16]) -> Result<MPoly> {
        if tuple.len() != self.ell {
            return Err(Error::Arity(format!("tuple {tuple:?} in degree {}", self.ell)));
        }
        if let Some(&bad) = tuple.iter().find(|&&i| i as usize >= self.bound()) {
            return Err(Error::Index(format!("index {bad} with {} variables", self.vars)));
        }
        let mut t = tuple.to_vec();
        let Some(sign) = sort_sign(&mut t) else {
            return Ok(MPoly::zero(&self.space));
        };
        Ok(match self.terms.get(&t) {
            None => MPoly::zero(&self.space),
            Some(c) if sign < 0 => -c,
            Some(c) => c.clone(),
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Arity(format!("{} vs {} variables", self.vars, other.vars)));
        }
        if *self.space != *other.space {
            return Err(Error::Arity("coefficient spaces differ".into()));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check(other)?;
        if self.ell != other.ell {
            return Err(Error::Arity(format!("degrees {} and {}", self.ell, other.ell)));
        }
        let mut out = self.clone();
        out.widened = self.widened || other.widened;
        for (t, c) in &other.terms {
            out.add_term(t.clone(), if negate { -c } else { c.clone() })?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    /// Multiplies every coefficient by an element of `R_n`.
    pub fn scale(&self, r: &MPoly) -> Self {
        self.map_coeffs(|c| c * r)
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.map_coeffs(|c| c.scale(k))
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        let mut out = Self::zero(self.vars, self.ell, &self.space);
        out.widened = self.widened;
        let mut sp = None;
        for (t, c) in &self.terms {
            let d = f(c);
            sp.get_or_insert_with(|| d.space().clone());
            if !d.is_zero() {
                out.terms.insert(t.clone(), d);
            }
        }
        if let Some(sp) = sp {
            out.space = sp;
        }
        out
    }

    /// Like [`map_coeffs`](Self::map_coeffs) but with an explicit target space.
    pub fn try_map_coeffs(&self, target: &Arc<Space>, f: impl Fn(&MPoly) -> Result<MPoly>) -> Result<Self> {
        let mut out = Self::zero(self.vars, self.ell, target);
        out.widened = self.widened;
        for (t, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                out.terms.insert(t.clone(), d);
            }
        }
        Ok(out)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: BTreeMap<Vec<u16>, Vec<MPoly>> = BTreeMap::new();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let mut t: Vec<u16> = t1.iter().chain(t2.iter()).copied().collect();
                let Some(sign) = sort_sign(&mut t) else { continue };
                let p = c1 * c2;
                acc.entry(t).or_default().push(if sign < 0 { -p } else { p });
            }
        }
        let mut out = Self::zero(self.vars, self.ell + other.ell, &self.space);
        out.widened = self.widened || other.widened;
        for (t, ps) in acc {
            let s = sum_all(&self.space, ps);
            if !s.is_zero() {
                out.terms.insert(t, s);
            }
        }
        Ok(out)
    }

    /// `deg_1` (x-degree of the coefficient minus the X-degree), if
    /// homogeneous.
    pub fn deg1(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        let mut common = None;
        for (t, c) in &self.terms {
            let xs: i64 = t.iter().map(|&i| i as i64).sum();
            for d in c.x_degrees() {
                let v = d - xs;
                match common {
                    None => common = Some(v),
                    Some(w) if w != v => return Err(Error::Inhomogeneous),
                    _ => {}
                }
            }
        }
        Ok(common.unwrap())
    }

    /// `deg_2 = n^2/4 + deg_1`, exact.
    pub fn deg2(&self) -> Result<BigRational> {
        let d = self.deg1()?;
        let n = self.vars as i64;
        Ok(BigRational::new(BigInt::from(n * n), BigInt::from(4)) + BigRational::from_integer(d.into()))
    }

    /// Splits a possibly inhomogeneous element into `deg_1` components.
    pub fn homogeneous_parts(&self) -> BTreeMap<i64, WedgeElement> {
        let mut parts: BTreeMap<i64, BTreeMap<Vec<u16>, Vec<(crate::poly::Mono, BigInt)>>> = BTreeMap::new();
        for (t, c) in &self.terms {
            let xs: i64 = t.iter().map(|&i| i as i64).sum();
            for ((m, k), d) in c.terms().iter().zip(c.x_degrees()) {
                parts.entry(d - xs).or_default().entry(t.clone()).or_default().push((m.clone(), k.clone()));
            }
        }
        parts
            .into_iter()
            .map(|(d, ts)| {
                let mut w = Self::zero(self.vars, self.ell, &self.space);
                w.widened = self.widened;
                for (t, ms) in ts {
                    w.terms.insert(t, MPoly::from_terms(&self.space, ms));
                }
                (d, w)
            })
            .collect()
    }
}

fn sum_all(space: &Arc<Space>, mut ps: Vec<MPoly>) -> MPoly {
    // pairwise summation keeps merges balanced
    while ps.len() > 1 {
        let mut next = Vec::with_capacity(ps.len().div_ceil(2));
        let mut it = ps.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(&a + &b),
                None => next.push(a),
            }
        }
        ps = next;
    }
    ps.pop().unwrap_or_else(|| MPoly::zero(space))
}

/// Serialized form `{"n", "ell", "terms": [[[i...], poly], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WedgeJson {
    pub n: usize,
    pub ell: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub widened: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<String>>,
    pub terms: Vec<(Vec<u16>, PolyJson)>,
}

impl From<&WedgeElement> for WedgeJson {
    fn from(w: &WedgeElement) -> Self {
        WedgeJson {
            n: w.vars,
            ell: w.ell,
            widened: w.widened,
            symbols: if w.terms.is_empty() { Some(w.space.symbols.iter().map(|s| s.name()).collect()) } else { None },
            terms: w.terms.iter().map(|(t, c)| (t.clone(), PolyJson::from(c))).collect(),
        }
    }
}

impl WedgeJson {
    pub fn to_wedge(&self) -> Result<WedgeElement> {
        let space = match (&self.symbols, self.terms.first()) {
            (_, Some((_, p))) => p.to_poly()?.space().clone(),
            (Some(names), None) => Space::from_names(names)?,
            (None, None) => Space::e(self.n),
        };
        let mut terms = Vec::new();
        for (t, p) in &self.terms {
            terms.push((t.clone(), p.to_poly()?.lift(&space)?));
        }
        WedgeElement::from_terms(self.n, self.ell, &space, self.widened, terms)
    }
}

impl Serialize for WedgeElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WedgeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WedgeElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WedgeJson::deserialize(d)?.to_wedge().map_err(serde::de::Error::custom)
    }
}
