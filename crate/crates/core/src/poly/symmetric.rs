use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::mpoly::{MPoly, Mono};
use super::space::{Rep, Space, Symbol};
use crate::linalg::bareiss_det;
use crate::{Error, Result};

/// `e_k^{(n)}` in the variables `x_1..x_n`.
pub fn elementary(n: usize, k: i64) -> MPoly {
    elementary_in(&Space::x(n), n, k)
}

/// `e_k` of the first `n` symbols of an X-REP space.
pub fn elementary_in(space: &Arc<Space>, n: usize, k: i64) -> MPoly {
    if k < 0 || k as usize > n {
        return MPoly::zero(space);
    }
    let k = k as usize;
    let mut terms = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut m = Mono::one(space.len());
        for &i in &subset {
            m.0[i] = 1;
        }
        terms.push((m, BigInt::one()));
        // next k-subset of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return MPoly::from_terms(space, terms);
            }
            i -= 1;
            if subset[i] < n - k + i {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `e_k` as an element of an E-REP space (zero outside `1..=arity`).
pub fn e_sym(space: &Arc<Space>, k: i64) -> MPoly {
    if k == 0 {
        return MPoly::one(space);
    }
    if k < 0 || k as usize > space.arity {
        return MPoly::zero(space);
    }
    match space.position(&Symbol::E(k as u16)) {
        Some(i) => MPoly::var(space, i),
        None => panic!("e{k} missing from space"),
    }
}

/// Expands an E-REP polynomial in `n` variables (extra symbols are kept).
pub fn to_x_rep(p: &MPoly, n: usize) -> Result<MPoly> {
    let src = p.space();
    if src.rep != Rep::E {
        return Err(Error::Arity("to_x_rep expects an E-REP polynomial".into()));
    }
    let extras: Vec<Symbol> = src.symbols.iter().filter(|s| !matches!(s, Symbol::E(_))).cloned().collect();
    let target = Space::x_with(n, &extras);
    let mut images = Vec::with_capacity(src.len());
    for s in &src.symbols {
        match s {
            Symbol::E(k) => {
                if *k as usize > n && p.max_degree_in(src.position(s).unwrap()) > 0 {
                    return Err(Error::Arity(format!("e{k} exceeds {n} variables")));
                }
                images.push(elementary_in(&target, n, *k as i64));
            }
            other => images.push(MPoly::symbol(&target, other)),
        }
    }
    Ok(p.substitute(&images, &target))
}

/// Rewrites a symmetric polynomial in `x_1..x_n` through `e_1..e_n`.
pub fn to_e_rep(p: &MPoly) -> Result<MPoly> {
    let src = p.space();
    if src.rep != Rep::X || src.len() != src.arity {
        return Err(Error::Arity("to_e_rep expects a pure X-REP polynomial".into()));
    }
    let n = src.arity;
    let target = Space::e(n);
    let es: Vec<MPoly> = (1..=n).map(|k| elementary(n, k as i64)).collect();
    let mut rem = p.clone();
    let mut out = MPoly::zero(&target);
    while let Some((m, c)) = rem.leading().cloned() {
        if m.0.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric);
        }
        let mut em = Mono::one(n);
        let mut prod = MPoly::constant(src, c.clone());
        for k in 0..n {
            let next = if k + 1 < n { m.0[k + 1] } else { 0 };
            let a = m.0[k] - next;
            em.0[k] = a;
            if a > 0 {
                prod = &prod * &es[k].pow(a as u32);
            }
        }
        rem = &rem - &prod;
        out = &out + &MPoly::from_terms(&target, [(em, c)]);
    }
    Ok(out)
}

/// `f -> f(x_1..x_{n-2}, x, -x)` for `f` written in `e_1..e_n` only.
pub fn bar(p: &MPoly) -> Result<MPoly> {
    let src = p.space();
    let n = src.arity;
    if n < 2 {
        return Err(Error::Arity(format!("bar needs at least 2 variables, got {n}")));
    }
    if src.rep != Rep::E || src.symbols.iter().any(|s| !matches!(s, Symbol::E(_))) {
        return Err(Error::Arity("bar expects an E-REP polynomial in e-symbols only".into()));
    }
    let target = Space::bar_target(n);
    let x2 = MPoly::symbol(&target, &Symbol::Bar).pow(2);
    let images: Vec<MPoly> = src
        .symbols
        .iter()
        .map(|s| match s {
            Symbol::E(k) => {
                let k = *k as i64;
                &e_sym(&target, k) - &(&x2 * &e_sym(&target, k - 2))
            }
            _ => unreachable!(),
        })
        .collect();
    Ok(p.substitute(&images, &target))
}

/// Direct substitution `x_{n-1} -> x`, `x_n -> -x` on an X-REP polynomial.
pub fn bar_direct(p: &MPoly) -> Result<MPoly> {
    let src = p.space();
    let n = src.arity;
    if src.rep != Rep::X || n < 2 {
        return Err(Error::Arity("bar_direct expects X-REP with n >= 2".into()));
    }
    let extras: Vec<Symbol> = src.symbols[n..].to_vec();
    let mut tsyms = extras.clone();
    tsyms.push(Symbol::Bar);
    let target = Space::x_with(n - 2, &tsyms);
    let x = MPoly::symbol(&target, &Symbol::Bar);
    let images: Vec<MPoly> = src
        .symbols
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i == n - 2 {
                x.clone()
            } else if i == n - 1 {
                -&x
            } else {
                MPoly::symbol(&target, s)
            }
        })
        .collect();
    Ok(p.substitute(&images, &target))
}

/// `prod_{i<j} (x_i + x_j)` in X-REP.
pub fn delta_plus(n: usize) -> MPoly {
    let sp = Space::x(n);
    let mut acc = MPoly::one(&sp);
    for i in 0..n {
        for j in i + 1..n {
            acc = &acc * &(&MPoly::var(&sp, i) + &MPoly::var(&sp, j));
        }
    }
    acc
}

/// `Delta^+_n` in E-REP as the determinant `det(e_{n-2i+j})_{1<=i,j<=n-1}`.
pub fn delta_plus_e(n: usize) -> MPoly {
    let sp = Space::e(n);
    if n <= 1 {
        return MPoly::one(&sp);
    }
    let m = n - 1;
    let rows: Vec<Vec<MPoly>> = (1..=m)
        .map(|i| (1..=m).map(|j| e_sym(&sp, n as i64 - 2 * i as i64 + j as i64)).collect())
        .collect();
    bareiss_det(rows).expect("square matrix")
}

/// Substitutes rational values for some `e_k`.
pub fn specialize_e(p: &MPoly, assignment: &[(usize, BigRational)]) -> Result<MPoly> {
    let a: Vec<(Symbol, BigRational)> = assignment.iter().map(|(k, v)| (Symbol::E(*k as u16), v.clone())).collect();
    p.specialize(&a)
}

/// The even specialization `e_1 = 1`, `e_{2n} = -1`, other `e_k = 0`.
pub fn special_even(vars: usize) -> Vec<(usize, BigRational)> {
    (1..=vars)
        .map(|k| {
            let v = if k == 1 {
                1
            } else if k == vars {
                -1
            } else {
                0
            };
            (k, BigRational::from_integer(v.into()))
        })
        .collect()
}

/// The odd specialization `e_{2n+1} = 1`, `e_{2n} = -1`, other `e_k = 0`.
pub fn special_odd(vars: usize) -> Vec<(usize, BigRational)> {
    (1..=vars)
        .map(|k| {
            let v = if k == vars {
                1
            } else if k + 1 == vars {
                -1
            } else {
                0
            };
            (k, BigRational::from_integer(v.into()))
        })
        .collect()
}

/// Values of `e_1..e_n` at an integer point.
pub fn elementary_values(point: &[BigInt]) -> Vec<BigInt> {
    let n = point.len();
    let mut e = vec![BigInt::from(0); n + 1];
    e[0] = BigInt::one();
    for x in point {
        for k in (1..=n).rev() {
            let t = &e[k - 1] * x;
            e[k] += t;
        }
    }
    e[1..].to_vec()
}
