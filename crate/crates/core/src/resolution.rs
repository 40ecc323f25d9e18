//! The two-term complex `phi_l(a, b) = (a ^ g + (-1)^l b ^ xi_1, b ^ g)` with
//! `g = w_1` (even) or `g = v_0` (odd), the quotient `M_{N,l}` and its graded
//! dimensions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::{basis_indices, family, BasisIndex, Kind};
use crate::linalg::SparseEchelon;
use crate::nullres::{e_monomials, first_generator, flatten, in_u};
use crate::qchar::ch_m;
use crate::wedge::WedgeElement;
use crate::{check_budget, Error, Parity, Result};

/// Largest `deg_1` degree accepted by the slice computations.
pub const MAX_SLICE_DEGREE: i64 = 16;

fn xi1(vars: usize) -> Result<Arc<WedgeElement>> {
    family(vars).generator(Kind::Xi, 1)
}

/// `phi_l(a, b)`; `b = None` stands for `0` (in particular when `l = 0`).
pub fn phi_map(vars: usize, ell: usize, a: &WedgeElement, b: Option<&WedgeElement>) -> Result<(WedgeElement, WedgeElement)> {
    let fam = family(vars);
    if a.ell() != ell || b.is_some_and(|b| b.ell() + 1 != ell) {
        return Err(Error::Arity(format!("phi_{ell} expects forms of degree {ell} and {}", ell as i64 - 1)));
    }
    if !in_u(a)? || !b.map_or(Ok(true), in_u)? {
        return Err(Error::NotInU);
    }
    let g = first_generator(vars)?;
    let mut first = a.wedge(&g)?;
    let second = match b {
        Some(b) => {
            let bx = b.wedge(&*xi1(vars)?)?;
            first = if ell.is_multiple_of(2) { first.add(&bx)? } else { first.sub(&bx)? };
            b.wedge(&g)?
        }
        None => WedgeElement::zero(vars, ell, fam.space()),
    };
    Ok((first, second))
}

/// First component of `phi_l`.
pub fn psi_map(vars: usize, ell: usize, a: &WedgeElement, b: Option<&WedgeElement>) -> Result<WedgeElement> {
    Ok(phi_map(vars, ell, a, b)?.0)
}

/// `phi_l . phi_{l-1} = 0` on every pair `(Q, 0)`, `(0, Q')` of basis elements,
/// for `1 <= l <= ell_max`.
pub fn complex_check(vars: usize, ell_max: usize) -> Result<bool> {
    check_budget(vars)?;
    let fam = family(vars);
    for ell in 1..=ell_max.min(vars.saturating_sub(1)) {
        let mut inputs: Vec<(WedgeElement, Option<WedgeElement>)> = Vec::new();
        for (_, q) in fam.enumerate_basis(ell - 1)? {
            inputs.push((q, None));
        }
        if ell >= 2 {
            for (_, q) in fam.enumerate_basis(ell - 2)? {
                inputs.push((WedgeElement::zero(vars, ell - 1, fam.space()), Some(q)));
            }
        }
        for (a, b) in inputs {
            let (c, d) = phi_map(vars, ell - 1, &a, b.as_ref())?;
            let (e, f) = phi_map(vars, ell, &c, Some(&d))?;
            if !e.is_zero() || !f.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does the label contain the first factor `w_1` (even) or `v_0` (odd)?
fn has_first(idx: &BasisIndex, parity: Parity) -> bool {
    match parity {
        Parity::Even => idx.j.first() == Some(&1),
        Parity::Odd => idx.v0,
    }
}

fn strip_first(idx: &BasisIndex, parity: Parity) -> BasisIndex {
    let mut out = idx.clone();
    match parity {
        Parity::Even => {
            out.j.remove(0);
        }
        Parity::Odd => out.v0 = false,
    }
    out
}

fn add_first(idx: &BasisIndex, parity: Parity) -> BasisIndex {
    let mut out = idx.clone();
    match parity {
        Parity::Even => out.j.insert(0, 1),
        Parity::Odd => out.v0 = true,
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasPartition {
    pub vars: usize,
    pub ell: usize,
    /// labels carrying the first factor
    pub plus: usize,
    /// labels without it
    pub minus: usize,
    pub total: usize,
    /// removing the first factor is a bijection onto the labels of degree `l-1` without it
    pub down_bijective: bool,
    /// adding it is a bijection onto the labels of degree `l+1` with it
    pub up_bijective: bool,
    pub ok: bool,
}

/// Classifies the degree-`l` labels by the presence of `w_1` (odd: `v_0`)
/// and checks that adding or removing that factor (which has `deg_1` zero)
/// matches them bijectively with the neighbouring degrees. The second
/// matching needs `l <= n - 1` in the even case.
pub fn bas_partition_check(vars: usize, ell: usize) -> BasPartition {
    let parity = Parity::of(vars);
    let here = basis_indices(vars, ell);
    let below: Vec<BasisIndex> = if ell >= 1 { basis_indices(vars, ell - 1) } else { Vec::new() };
    let above = basis_indices(vars, ell + 1);
    let (with, without): (Vec<&BasisIndex>, Vec<&BasisIndex>) = here.iter().partition(|b| has_first(b, parity));

    let onto = |src: Vec<BasisIndex>, target: Vec<&BasisIndex>| {
        let src: BTreeSet<BasisIndex> = src.into_iter().collect();
        let target: BTreeSet<BasisIndex> = target.into_iter().cloned().collect();
        src == target
    };
    let down_bijective = onto(
        with.iter().map(|b| strip_first(b, parity)).collect(),
        below.iter().filter(|b| !has_first(b, parity)).collect(),
    );
    let up_bijective = onto(
        without.iter().map(|b| add_first(b, parity)).collect(),
        above.iter().filter(|b| has_first(b, parity)).collect(),
    );
    let degrees = here.iter().all(|b| {
        let other = if has_first(b, parity) { strip_first(b, parity) } else { add_first(b, parity) };
        other.deg1(parity) == b.deg1(parity)
    });
    BasPartition {
        vars,
        ell,
        plus: with.len(),
        minus: without.len(),
        total: here.len(),
        down_bijective,
        up_bijective,
        ok: with.len() + without.len() == here.len() && down_bijective && up_bijective && degrees,
    }
}

/// One `deg_1` slice of `U_{N,l}` and of the submodule divided out in `M_{N,l}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSlice {
    pub vars: usize,
    pub ell: usize,
    pub degree: i64,
    pub u_dim: usize,
    pub image_rank: usize,
}

impl GradedSlice {
    pub fn quotient_dim(&self) -> usize {
        self.u_dim - self.image_rank
    }
}

fn slice_rank(
    gens: &[(i64, WedgeElement)],
    vars: usize,
    d: i64,
    keys: &mut HashMap<(Vec<u16>, crate::poly::Mono), usize>,
) -> (usize, usize) {
    let mut ech = SparseEchelon::new();
    let mut count = 0;
    for (dg, g) in gens {
        for mu in e_monomials(vars, d - dg) {
            count += 1;
            ech.insert(flatten(g, Some(&mu), keys));
        }
    }
    (count, ech.rank())
}

/// `dim M_{N,l}(d)` for `0 <= d <= d_max`, as `dim U(d) - rank(image(d))`.
pub fn graded_quotient_slices(vars: usize, ell: usize, d_max: i64) -> Result<Vec<GradedSlice>> {
    check_budget(vars)?;
    if d_max > MAX_SLICE_DEGREE {
        return Err(Error::Budget(format!("degree {d_max} exceeds {MAX_SLICE_DEGREE}")));
    }
    let fam = family(vars);
    let parity = fam.parity();
    let u_count: Vec<i64> = basis_indices(vars, ell).iter().map(|b| b.deg1(parity)).collect();
    let g = first_generator(vars)?;
    let x = xi1(vars)?;
    let mut gens: Vec<(i64, WedgeElement)> = Vec::new();
    if ell >= 1 {
        for (idx, q) in fam.enumerate_basis(ell - 1)? {
            gens.push((idx.deg1(parity), q.wedge(&g)?));
        }
    }
    if ell >= 2 {
        for (idx, q) in fam.enumerate_basis(ell - 2)? {
            gens.push((idx.deg1(parity), q.wedge(&x)?));
        }
    }
    let mut out = Vec::new();
    for d in 0..=d_max {
        let u_dim: usize = u_count.iter().map(|&dr| e_monomials(vars, d - dr).len()).sum();
        let mut keys = HashMap::new();
        let (_, image_rank) = slice_rank(&gens, vars, d, &mut keys);
        out.push(GradedSlice { vars, ell, degree: d, u_dim, image_rank });
    }
    Ok(out)
}

pub fn graded_quotient_dims(vars: usize, ell: usize, d_max: i64) -> Result<Vec<usize>> {
    Ok(graded_quotient_slices(vars, ell, d_max)?.iter().map(GradedSlice::quotient_dim).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientComparison {
    pub vars: usize,
    pub ell: usize,
    pub computed: Vec<usize>,
    pub character: Vec<String>,
    pub matches: bool,
}

/// Graded dimensions against the coefficients of `ch M_{N,l}`.
pub fn compare_with_character(vars: usize, ell: usize, d_max: i64) -> Result<QuotientComparison> {
    let computed = graded_quotient_dims(vars, ell, d_max)?;
    let ch = ch_m(vars, ell as i64, d_max as usize);
    let character: Vec<String> = ch.coeffs.iter().map(|c| c.to_string()).collect();
    let matches = computed.iter().zip(&ch.coeffs).all(|(a, b)| num_bigint::BigInt::from(*a) == *b);
    Ok(QuotientComparison { vars, ell, computed, character, matches })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub vars: usize,
    pub m: usize,
    /// `(degree, slice dimension, rank of the image)`
    pub slices: Vec<(i64, usize, usize)>,
    pub injective: bool,
}

/// `xi_1 ^ : wedge^m H -> wedge^{m+2} H` on all `deg_1` slices up to `d_max`.
pub fn xi1_injectivity(vars: usize, m: usize, d_max: i64) -> Result<InjectivityReport> {
    check_budget(vars)?;
    if vars % 2 == 1 {
        return Err(Error::Arity("xi_1 injectivity is stated for an even number of variables".into()));
    }
    if m + 2 > vars {
        return Err(Error::Arity(format!("wedge^{} H vanishes for {vars} variables", m + 2)));
    }
    if d_max > MAX_SLICE_DEGREE {
        return Err(Error::Budget(format!("degree {d_max} exceeds {MAX_SLICE_DEGREE}")));
    }
    let fam = family(vars);
    let x = xi1(vars)?;
    let tuples = crate::construct::column_tuples(vars, m);
    let mut gens: Vec<(i64, WedgeElement)> = Vec::new();
    for t in &tuples {
        let mut terms = BTreeMap::new();
        terms.insert(t.clone(), crate::poly::MPoly::one(fam.space()));
        let unit = WedgeElement::from_terms(vars, m, fam.space(), false, terms)?;
        let s: i64 = t.iter().map(|&i| i as i64).sum();
        gens.push((-s, unit.wedge(&x)?));
    }
    let d_min = -gens.iter().map(|(d, _)| -d).max().unwrap_or(0);
    let mut slices = Vec::new();
    let mut injective = true;
    for d in d_min..=d_max {
        let mut keys = HashMap::new();
        let (count, rank) = slice_rank(&gens, vars, d, &mut keys);
        injective &= count == rank;
        slices.push((d, count, rank));
    }
    Ok(InjectivityReport { vars, m, slices, injective })
}
