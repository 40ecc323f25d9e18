//! The explicit elements of `U_{N,l}`: the polynomials `P_{r,s}`, the
//! degree-one generators `v_i`, `w_j` (and the scaffolding `v_0`, `w_0`),
//! the degree-two generators `xi_k`, the kernel elements `Xi_1`, `Xi_2`, and
//! the candidate bases `v_I ^ w_J ^ xi_K`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::poly::{e_sym, MPoly, Space, Symbol};
use crate::wedge::WedgeElement;
use crate::{Error, Parity, Result};

/// Which generator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    V,
    W,
    V0,
    Xi,
    Xi1,
    Xi2,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s.to_ascii_lowercase().as_str() {
            "v" => Ok(Kind::V),
            "w" => Ok(Kind::W),
            "v0" => Ok(Kind::V0),
            "xi" => Ok(Kind::Xi),
            "xi1" | "bigxi1" => Ok(Kind::Xi1),
            "xi2" | "bigxi2" => Ok(Kind::Xi2),
            _ => Err(Error::Parse(format!("unknown generator kind {s:?}"))),
        }
    }
}

/// Memoized data attached to a fixed number of variables.
pub struct Family {
    vars: usize,
    space: Arc<Space>,
    xx: Arc<Space>,
    ptable: RwLock<HashMap<(i64, i64), MPoly>>,
    gens: RwLock<HashMap<(Kind, usize), Arc<WedgeElement>>>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family").field("vars", &self.vars).finish()
    }
}

/// The shared family for `vars` variables.
pub fn family(vars: usize) -> Arc<Family> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Family>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.read().unwrap().get(&vars) {
        return f.clone();
    }
    let mut w = cache.write().unwrap();
    w.entry(vars).or_insert_with(|| Arc::new(Family::new(vars))).clone()
}

impl Family {
    pub fn new(vars: usize) -> Family {
        Family {
            vars,
            space: Space::e(vars),
            xx: Space::e_with(vars, &[Symbol::Form(1), Symbol::Form(2)]),
            ptable: RwLock::new(HashMap::new()),
            gens: RwLock::new(HashMap::new()),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `n` with `vars = 2n` or `2n+1`.
    pub fn half(&self) -> usize {
        self.vars / 2
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.vars)
    }

    /// The ring `R_N` in E-REP.
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn e(&self, k: i64) -> MPoly {
        e_sym(&self.space, k)
    }

    fn r_max(&self) -> i64 {
        match self.parity() {
            Parity::Even => self.half() as i64,
            Parity::Odd => self.half() as i64 + 1,
        }
    }

    /// `P_{r,s}` for `1 <= r <= n` (even) or `n+1` (odd), any `s`.
    pub fn p(&self, r: i64, s: i64) -> Result<MPoly> {
        if r < 1 || r > self.r_max() {
            return Err(Error::Index(format!("P_{{{r},{s}}} with {} variables", self.vars)));
        }
        Ok(self.p_ext(r, s))
    }

    /// `P_{r,s}` for all integers, with `P_{r,s} = e_{2(s+r)-3}` for `r <= 0`
    /// and the recursion otherwise.
    pub fn p_ext(&self, r: i64, s: i64) -> MPoly {
        if r <= 0 {
            return self.e(2 * (s + r) - 3);
        }
        if r == 1 {
            return self.e(2 * s - 1);
        }
        if let Some(p) = self.ptable.read().unwrap().get(&(r, s)) {
            return p.clone();
        }
        let v = &self.p_ext(r - 1, s + 1) - &(&self.e(2 * s) * &self.p_ext(r - 1, 1));
        self.ptable.write().unwrap().insert((r, s), v.clone());
        v
    }

    fn univariate(&self, terms: impl IntoIterator<Item = (u16, MPoly)>) -> Result<WedgeElement> {
        let terms: Vec<(u16, MPoly)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let widened = terms.iter().any(|(i, _)| *i as usize >= self.vars);
        WedgeElement::from_terms(self.vars, 1, &self.space, widened, terms.into_iter().map(|(i, c)| (vec![i], c)))
    }

    /// Returns a generator; indices follow the ranges of the construction.
    pub fn generator(&self, kind: Kind, index: usize) -> Result<Arc<WedgeElement>> {
        let key = match kind {
            Kind::V0 | Kind::Xi1 | Kind::Xi2 => (kind, 0),
            _ => (kind, index),
        };
        if let Some(g) = self.gens.read().unwrap().get(&key) {
            return Ok(g.clone());
        }
        let g = Arc::new(self.build(kind, index)?);
        self.gens.write().unwrap().insert(key, g.clone());
        Ok(g)
    }

    fn build(&self, kind: Kind, index: usize) -> Result<WedgeElement> {
        let n = self.half() as i64;
        let i = index as i64;
        let bad = || Error::Index(format!("{kind:?}_{index} with {} variables", self.vars));
        match (self.parity(), kind) {
            (_, Kind::V0) => self.univariate((0..=n).map(|j| (2 * j as u16, self.e(2 * j)))),
            (Parity::Even, Kind::V) => {
                if !(1..=n).contains(&i) {
                    return Err(bad());
                }
                self.univariate((1..=n).map(|s| (2 * (s - 1) as u16, self.p_ext(i, s))))
            }
            (Parity::Even, Kind::W) => {
                if !(1..=n).contains(&i) {
                    return Err(bad());
                }
                self.univariate((1..=n).map(|s| ((2 * s - 1) as u16, self.p_ext(i, s))))
            }
            (Parity::Odd, Kind::V) => {
                if !(1..=n).contains(&i) {
                    return Err(bad());
                }
                self.univariate((1..=n + 1).map(|s| (2 * (s - 1) as u16, self.p_ext(i, s))))
            }
            (Parity::Odd, Kind::W) => {
                // w_0 is scaffolding for xi_1 and leaves H
                if !(0..=n).contains(&i) {
                    return Err(bad());
                }
                self.univariate((1..=n + 1).map(|s| ((2 * s - 1) as u16, self.p_ext(i + 1, s))))
            }
            (_, Kind::Xi) => {
                if !(1..=n).contains(&i) {
                    return Err(bad());
                }
                self.xi_def(index)
            }
            (_, Kind::Xi1) => self.big_xi1(),
            (_, Kind::Xi2) => self.big_xi2(),
        }
    }

    /// Writes a degree-one element as a polynomial in `X_a`.
    fn in_form(&self, w: &WedgeElement, a: u8) -> MPoly {
        let x = MPoly::symbol(&self.xx, &Symbol::Form(a));
        let mut acc = MPoly::zero(&self.xx);
        for (t, c) in w.terms() {
            acc += &(&c.lift(&self.xx).unwrap() * &x.pow(t[0] as u32));
        }
        acc
    }

    /// Converts an antisymmetric polynomial in `X_1, X_2` to a 2-form.
    fn two_form(&self, f: &MPoly) -> Result<WedgeElement> {
        let parts = f.split_trailing(2);
        let mut terms = Vec::new();
        let mut widened = false;
        for (e, c) in &parts {
            let (a, b) = (e[0], e[1]);
            let mirror = parts.get(&vec![b, a]);
            let ok = match mirror {
                Some(m) => *m == -c,
                None => false,
            };
            if !ok {
                return Err(Error::Arity("polynomial in X1, X2 is not antisymmetric".into()));
            }
            if a < b {
                if b as usize > self.vars {
                    return Err(Error::Index(format!("X-degree {b} exceeds {}", self.vars)));
                }
                widened |= b as usize == self.vars;
                terms.push((vec![a, b], c.clone()));
            }
        }
        WedgeElement::from_terms(self.vars, 2, &self.space, widened, terms)
    }

    /// `xi_k` from its defining formula, dividing exactly by `X_1 + X_2`.
    fn xi_def(&self, k: usize) -> Result<WedgeElement> {
        let v0 = self.generator(Kind::V0, 0)?;
        let w = match self.parity() {
            Parity::Even => self.generator(Kind::W, k)?,
            Parity::Odd => self.generator(Kind::W, k - 1)?,
        };
        let (v1, v2) = (self.in_form(&v0, 1), self.in_form(&v0, 2));
        let (w1, w2) = (self.in_form(&w, 1), self.in_form(&w, 2));
        let x1 = MPoly::symbol(&self.xx, &Symbol::Form(1));
        let x2 = MPoly::symbol(&self.xx, &Symbol::Form(2));
        let sym = &(&v1 * &w2) + &(&v2 * &w1);
        let anti = &(&v2 * &w1) - &(&v1 * &w2);
        let anti = match self.parity() {
            Parity::Even => anti,
            Parity::Odd => -anti,
        };
        let sum = &x1 + &x2;
        let num = &(&(&x1 - &x2) * &sym) + &(&sum * &anti);
        let twice = num.div_exact(&sum)?;
        let xi = twice.div_scalar(&BigInt::from(2))?;
        self.two_form(&xi)
    }

    fn theta(&self, a: u8, sign: i64) -> MPoly {
        let x = MPoly::symbol(&self.xx, &Symbol::Form(a));
        let mut acc = MPoly::zero(&self.xx);
        for k in 0..=self.vars as i64 {
            let c = e_sym(&self.xx, k).scale(&BigInt::from(sign.pow(k as u32)));
            acc += &(&c * &x.pow(k as u32));
        }
        acc
    }

    /// `Xi_1` from `Theta_+` and `Theta_-`.
    fn big_xi1(&self) -> Result<WedgeElement> {
        let sgn = if self.vars % 2 == 1 { 1 } else { -1 };
        let twice = &self.theta(1, 1) + &self.theta(1, -1).scale(&BigInt::from(sgn));
        let f = twice.div_scalar(&BigInt::from(2))?;
        let parts = f.split_trailing(2);
        self.univariate(parts.into_iter().map(|(e, c)| (e[0], c)))
    }

    /// `Xi_2` from `Theta_+` and `Theta_-`.
    fn big_xi2(&self) -> Result<WedgeElement> {
        let (p1, p2) = (self.theta(1, 1), self.theta(2, 1));
        let (m1, m2) = (self.theta(1, -1), self.theta(2, -1));
        let x1 = MPoly::symbol(&self.xx, &Symbol::Form(1));
        let x2 = MPoly::symbol(&self.xx, &Symbol::Form(2));
        let sum = &x1 + &x2;
        let first = &(&(&p1 * &p2) - &(&m1 * &m2)) * &(&x1 - &x2);
        let second = &(&p1 * &m2) - &(&p2 * &m1);
        let second = if self.vars.is_multiple_of(2) { second } else { -second };
        let num = &first + &(&second * &sum);
        let twice = num.div_exact(&sum)?;
        let f = twice.div_scalar(&BigInt::from(2))?;
        self.two_form(&f)
    }

    /// `xi_k` obtained by dividing `sum_{i,j} (e_{2j} P_{k,i} - e_{2i} P_{k,j}) X_1^{2i} X_2^{2j}`
    /// by `X_1 + X_2` (even case).
    pub fn xi_from_product_formula(&self, k: usize) -> Result<WedgeElement> {
        self.require_even()?;
        let n = self.half() as i64;
        let k = k as i64;
        let x1 = MPoly::symbol(&self.xx, &Symbol::Form(1));
        let x2 = MPoly::symbol(&self.xx, &Symbol::Form(2));
        let lift = |p: MPoly| p.lift(&self.xx).unwrap();
        let mut num = MPoly::zero(&self.xx);
        for i in 0..=n {
            for j in 0..=n {
                let c = &(&self.e(2 * j) * &self.p_ext(k, i)) - &(&self.e(2 * i) * &self.p_ext(k, j));
                if !c.is_zero() {
                    num += &(&lift(c) * &(&x1.pow(2 * i as u32) * &x2.pow(2 * j as u32)));
                }
            }
        }
        let f = num.div_exact(&(&x1 + &x2))?;
        self.two_form(&f)
    }

    fn require_even(&self) -> Result<()> {
        if self.parity() == Parity::Odd {
            return Err(Error::Arity("only defined for an even number of variables".into()));
        }
        Ok(())
    }

    /// The coefficient `a^{(k)}_{ij}` of `X^{2i+1} ^ X^{2j}` in `xi_k`, by the
    /// two-branch closed form in terms of `e_{2r} P_{k-1,s}` resp. `e_{2r} P_{k,s}`.
    pub fn xi_expansion_coeff(&self, k: usize, i: usize, j: usize) -> Result<MPoly> {
        self.require_even()?;
        let n = self.half();
        if !(1..=n).contains(&k) || i >= n || j >= n {
            return Err(Error::Index(format!("a^({k})_{{{i},{j}}} with n = {n}")));
        }
        let (k, i, j, n) = (k as i64, i as i64, j as i64, n as i64);
        let mut acc = MPoly::zero(&self.space);
        // r ranges over 0..=total since e_{2r} vanishes for r < 0 and the
        // P factor vanishes for s <= 0
        if i <= n - k {
            let total = i + j + 2;
            for r in 0..=total {
                let term = &self.e(2 * r) * &self.p_ext(k - 1, total - r);
                if r <= i {
                    acc += &term;
                }
                if r > j {
                    acc -= &term;
                }
            }
        } else {
            let total = i + j + 1;
            for r in 0..=total {
                let term = &self.e(2 * r) * &self.p_ext(k, total - r);
                if r <= j {
                    acc += &term;
                }
                if r > i {
                    acc -= &term;
                }
            }
        }
        Ok(acc)
    }

    /// `a^{(k)}_{ij}` as the finite sums over `P_{k+r, j+1}` resp. `P_{k-r, j+1}`.
    pub fn xi_expansion_coeff_sums(&self, k: usize, i: usize, j: usize) -> Result<MPoly> {
        self.require_even()?;
        let n = self.half();
        if !(1..=n).contains(&k) || i >= n || j >= n {
            return Err(Error::Index(format!("a^({k})_{{{i},{j}}} with n = {n}")));
        }
        let (k, i, j, n) = (k as i64, i as i64, j as i64, n as i64);
        let mut acc = MPoly::zero(&self.space);
        if i <= n - k {
            for r in 0..=i {
                acc += &(&self.e(2 * (i - r)) * &self.p_ext(k + r, j + 1));
            }
        } else {
            for r in 1..=n - i {
                acc -= &(&self.e(2 * (i + r)) * &self.p_ext(k - r, j + 1));
            }
        }
        Ok(acc)
    }

    /// `sum_{i,j} a^{(k)}_{ij} X^{2i+1} ^ X^{2j}`.
    pub fn xi_from_coeffs(&self, k: usize) -> Result<WedgeElement> {
        let n = self.half();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                terms.push((vec![2 * i as u16 + 1, 2 * j as u16], self.xi_expansion_coeff(k, i, j)?));
            }
        }
        WedgeElement::from_terms(self.vars, 2, &self.space, false, terms)
    }

    /// `xi_k` as the double sum of `e_{2(k-i+r)} X^{2r+1} ^ v_i`.
    pub fn xi_from_v_expansion(&self, k: usize) -> Result<WedgeElement> {
        self.require_even()?;
        let n = self.half() as i64;
        let kk = k as i64;
        let mut acc = WedgeElement::zero(self.vars, 2, &self.space);
        let mut add = |i: i64, r: i64, sign: i64| -> Result<()> {
            let c = self.e(2 * (kk - i + r)).scale(&BigInt::from(sign));
            if c.is_zero() {
                return Ok(());
            }
            let x = self.univariate([((2 * r + 1) as u16, c)])?;
            let v = self.generator(Kind::V, i as usize)?;
            acc = acc.add(&x.wedge(&v)?)?;
            Ok(())
        };
        for i in 1..kk {
            for r in n - kk + 1..=n - kk + i {
                add(i, r, -1)?;
            }
        }
        for i in kk..=n {
            for r in i - kk..=n - kk {
                add(i, r, 1)?;
            }
        }
        Ok(acc)
    }

    /// `xi_k` as the double sum of `e_{2(k-i+r)} w_i ^ X^{2r}`.
    pub fn xi_from_w_expansion(&self, k: usize) -> Result<WedgeElement> {
        self.require_even()?;
        let n = self.half() as i64;
        let kk = k as i64;
        let mut acc = WedgeElement::zero(self.vars, 2, &self.space);
        let mut add = |i: i64, r: i64, sign: i64| -> Result<()> {
            let c = self.e(2 * (kk - i + r)).scale(&BigInt::from(sign));
            if c.is_zero() {
                return Ok(());
            }
            let x = self.univariate([((2 * r) as u16, c)])?;
            let w = self.generator(Kind::W, i as usize)?;
            acc = acc.add(&w.wedge(&x)?)?;
            Ok(())
        };
        for i in 1..kk {
            for r in n - kk + 1..=n - kk + i {
                add(i, r, -1)?;
            }
        }
        for i in kk..=n {
            for r in i - kk..=n - kk {
                add(i, r, 1)?;
            }
        }
        Ok(acc)
    }

    /// The basis element labelled by `idx`.
    pub fn basis_element(&self, idx: &BasisIndex) -> Result<WedgeElement> {
        idx.validate(self.vars)?;
        let mut acc = WedgeElement::unit(self.vars, &self.space);
        if idx.v0 {
            acc = acc.wedge(&*self.generator(Kind::V0, 0)?)?;
        }
        for &i in &idx.i {
            acc = acc.wedge(&*self.generator(Kind::V, i as usize)?)?;
        }
        for &j in &idx.j {
            acc = acc.wedge(&*self.generator(Kind::W, j as usize)?)?;
        }
        for &k in &idx.k {
            acc = acc.wedge(&*self.generator(Kind::Xi, k as usize)?)?;
        }
        Ok(acc)
    }

    /// Labels and elements of the candidate basis of `U_{N,l}`.
    pub fn enumerate_basis(&self, ell: usize) -> Result<Vec<(BasisIndex, WedgeElement)>> {
        basis_indices(self.vars, ell)
            .into_iter()
            .map(|idx| {
                let w = self.basis_element(&idx)?;
                Ok((idx, w))
            })
            .collect()
    }
}

/// Label of `[v_0 ^] v_I ^ w_J ^ xi_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub v0: bool,
    pub i: Vec<u16>,
    pub j: Vec<u16>,
    pub k: Vec<u16>,
}

impl BasisIndex {
    pub fn new(i: &[u16], j: &[u16], k: &[u16]) -> Self {
        BasisIndex { v0: false, i: i.to_vec(), j: j.to_vec(), k: k.to_vec() }
    }

    /// `(l1, l2, l3)`.
    pub fn lengths(&self) -> (usize, usize, usize) {
        (self.i.len(), self.j.len(), self.k.len())
    }

    pub fn ell(&self) -> usize {
        self.v0 as usize + self.i.len() + self.j.len() + 2 * self.k.len()
    }

    /// Checks the index constraints for `vars` variables.
    pub fn validate(&self, vars: usize) -> Result<()> {
        let n = (vars / 2) as i64;
        let (l1, _, l3) = self.lengths();
        let m = n - l1 as i64 - l3 as i64;
        let bad = |why: &str| Err(Error::Index(format!("{self}: {why}")));
        if self.v0 && vars.is_multiple_of(2) {
            return bad("v0 only occurs for an odd number of variables");
        }
        if !self.i.windows(2).all(|w| w[0] < w[1]) || self.i.iter().any(|&x| x < 1 || x as i64 > n) {
            return bad("I must be strictly increasing in 1..=n");
        }
        if !self.j.windows(2).all(|w| w[0] < w[1]) || self.j.iter().any(|&x| x < 1 || x as i64 > m) {
            return bad("J must be strictly increasing in 1..=n-l1-l3");
        }
        if !self.k.windows(2).all(|w| w[0] <= w[1]) || self.k.iter().any(|&x| x < 1 || x as i64 > m + 1) {
            return bad("K must be weakly increasing in 1..=n-l1-l3+1");
        }
        Ok(())
    }

    /// `deg_1` of the labelled element.
    pub fn deg1(&self, parity: Parity) -> i64 {
        let v: i64 = self.i.iter().map(|&i| 2 * i as i64 - 1).sum();
        let w: i64 = match parity {
            Parity::Even => self.j.iter().map(|&j| 2 * j as i64 - 2).sum(),
            Parity::Odd => self.j.iter().map(|&j| 2 * j as i64).sum(),
        };
        let x: i64 = self.k.iter().map(|&k| 2 * k as i64 - 2).sum();
        v + w + x
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.v0 {
            parts.push("v0".to_string());
        }
        parts.extend(self.i.iter().map(|i| format!("v{i}")));
        parts.extend(self.j.iter().map(|j| format!("w{j}")));
        parts.extend(self.k.iter().map(|k| format!("xi{k}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("^"))
        }
    }
}

/// Strictly increasing `len`-subsets of `lo..=hi` in lexicographic order.
pub fn combinations(lo: i64, hi: i64, len: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(lo: i64, hi: i64, len: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let need = (len - cur.len()) as i64;
        let mut x = lo;
        while x + need - 1 <= hi {
            cur.push(x as u16);
            rec(x + 1, hi, len, cur, out);
            cur.pop();
            x += 1;
        }
    }
    rec(lo, hi, len, &mut cur, &mut out);
    out
}

/// Weakly increasing `len`-tuples from `lo..=hi` in lexicographic order.
pub fn multisets(lo: i64, hi: i64, len: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(lo: i64, hi: i64, len: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in lo..=hi {
            cur.push(x as u16);
            rec(x, hi, len, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, len, &mut cur, &mut out);
    out
}

/// `v_I ^ w_J ^ xi_K` labels for `2n` variables and degree `l`, ordered
/// lexicographically by `(l1, l2, l3, I, J, K)`.
pub fn even_indices(n: usize, ell: usize) -> Vec<BasisIndex> {
    let n = n as i64;
    let mut out = Vec::new();
    for l1 in 0..=ell {
        for l2 in 0..=ell - l1 {
            let rest = ell - l1 - l2;
            if rest % 2 == 1 {
                continue;
            }
            let l3 = rest / 2;
            let m = n - l1 as i64 - l3 as i64;
            if m < 0 {
                continue;
            }
            for i in combinations(1, n, l1) {
                for j in combinations(1, m, l2) {
                    for k in multisets(1, m + 1, l3) {
                        out.push(BasisIndex { v0: false, i: i.clone(), j: j.clone(), k });
                    }
                }
            }
        }
    }
    out
}

/// Labels of the candidate basis for `vars` variables (the `v_0` part first
/// in the odd case).
pub fn basis_indices(vars: usize, ell: usize) -> Vec<BasisIndex> {
    let n = vars / 2;
    match Parity::of(vars) {
        Parity::Even => even_indices(n, ell),
        Parity::Odd => {
            let mut out: Vec<BasisIndex> = if ell >= 1 {
                even_indices(n, ell - 1).into_iter().map(|b| BasisIndex { v0: true, ..b }).collect()
            } else {
                Vec::new()
            };
            out.extend(even_indices(n, ell));
            out
        }
    }
}

/// Binomial coefficient as `u128` (zero outside the usual range).
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// Strictly increasing `l`-tuples from `0..vars`, lexicographic from the left.
pub fn column_tuples(vars: usize, ell: usize) -> Vec<Vec<u16>> {
    combinations(0, vars as i64 - 1, ell)
}
