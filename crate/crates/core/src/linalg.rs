//! Exact linear algebra: fraction-free determinants over integral domains,
//! Gauss-Jordan over the rationals, and an incremental sparse echelon form
//! over the integers for rank counting.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::MPoly;
use crate::{Error, Result};

/// The operations Bareiss elimination needs.
pub trait Domain: Clone {
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    fn div_exact_elem(&self, other: &Self) -> Result<Self>;
}

impl Domain for MPoly {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, other: &Self) -> Result<Self> {
        self.div_exact(other)
    }
}

impl Domain for BigInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, other: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(other);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotExact)
        }
    }
}

/// Determinant by fraction-free elimination with row pivoting.
///
/// The matrix must be square and non-empty.
pub fn bareiss_det<T: Domain>(mut m: Vec<Vec<T>>) -> Result<T> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Arity("determinant needs a non-empty square matrix".into()));
    }
    let mut negate = false;
    let mut prev: Option<T> = None;
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(m[0][0].sub_elem(&m[0][0])),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let t = row[j].mul_elem(&pivot_row[k]).sub_elem(&row[k].mul_elem(&pivot_row[j]));
                row[j] = match &prev {
                    Some(p) => t.div_exact_elem(p)?,
                    None => t,
                };
            }
        }
        prev = Some(m[k][k].clone());
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg_elem() } else { d })
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Solves `A y = b` where `a` is given column-wise: `cols[j]` is the
/// `j`-th column. Returns `None` if inconsistent; errors if the solution is
/// not unique.
pub fn solve_columns(cols: &[Vec<BigRational>], b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    let nunk = cols.len();
    let neq = b.len();
    let mut rows: Vec<Vec<BigRational>> = (0..neq)
        .map(|i| {
            let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&nunk) {
        return Ok(None);
    }
    if pivots.len() < nunk {
        return Err(Error::Arity("solution is not unique".into()));
    }
    let mut y = vec![BigRational::zero(); nunk];
    for (r, &c) in pivots.iter().enumerate() {
        y[c] = rows[r][nunk].clone();
    }
    Ok(Some(y))
}

/// Incremental echelon basis of integer row vectors, kept primitive.
///
/// Rows are sparse maps from column to nonzero value; each stored row has
/// a distinct pivot (its smallest column).
#[derive(Default, Debug, Clone)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the residue.
    pub fn reduce(&self, mut v: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
        let mut from = 0usize;
        loop {
            let Some((&c, _)) = v.range(from..).next() else {
                return v;
            };
            match self.rows.get(&c) {
                None => from = c + 1,
                Some(row) => {
                    let a = row[&c].clone();
                    let b = v[&c].clone();
                    let g = a.gcd(&b);
                    let (fa, fb) = (&a / &g, &b / &g);
                    let mut out = BTreeMap::new();
                    let mut keys: Vec<usize> = v.keys().chain(row.keys()).copied().collect();
                    keys.sort_unstable();
                    keys.dedup();
                    for k in keys {
                        let x = v.get(&k).map(|x| x * &fa).unwrap_or_default()
                            - row.get(&k).map(|y| y * &fb).unwrap_or_default();
                        if !x.is_zero() {
                            out.insert(k, x);
                        }
                    }
                    v = primitive(out);
                    from = c + 1;
                }
            }
        }
    }

    /// Adds `v`; returns true if it was independent of the stored rows.
    pub fn insert(&mut self, v: BTreeMap<usize, BigInt>) -> bool {
        let r = self.reduce(v);
        match r.keys().next().copied() {
            None => false,
            Some(c) => {
                self.rows.insert(c, r);
                true
            }
        }
    }
}

fn primitive(mut v: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let g = v.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.values_mut() {
            *x /= &g;
        }
    }
    if let Some((_, first)) = v.iter().next() {
        if first.is_negative() {
            for x in v.values_mut() {
                *x = -&*x;
            }
        }
    }
    v
}

/// Rank of integer sparse rows.
pub fn sparse_rank(rows: impl IntoIterator<Item = BTreeMap<usize, BigInt>>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn integer_determinants() {
        let m = vec![vec![BigInt::from(4), BigInt::from(4)], vec![BigInt::from(-20), BigInt::from(-4)]];
        assert_eq!(bareiss_det(m).unwrap(), BigInt::from(64));
        // needs a pivot swap
        let m: Vec<Vec<BigInt>> = [[0, 1, 2], [3, 4, 5], [6, 7, 9]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss_det(m).unwrap(), BigInt::from(-3));
        let sing: Vec<Vec<BigInt>> =
            [[1, 2], [2, 4]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert!(bareiss_det(sing).unwrap().is_zero());
    }

    #[test]
    fn rational_rank_and_solve() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank_rational(&rows), 2);
        let cols = vec![vec![q(1), q(0)], vec![q(1), q(1)]];
        let y = solve_columns(&cols, &[q(3), q(1)]).unwrap().unwrap();
        assert_eq!(y, vec![q(2), q(1)]);
        let cols = vec![vec![q(1), q(1)]];
        assert!(solve_columns(&cols, &[q(1), q(2)]).unwrap().is_none());
    }

    #[test]
    fn sparse_echelon_counts_rank() {
        let row = |v: &[(usize, i64)]| v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect::<BTreeMap<_, _>>();
        let rows = vec![row(&[(0, 2), (3, 4)]), row(&[(0, 1), (3, 2)]), row(&[(1, 5)]), row(&[(0, 3), (1, 5), (3, 6)])];
        assert_eq!(sparse_rank(rows), 2);
    }
}
