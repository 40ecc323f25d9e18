use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A polynomial variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// elementary symmetric generator `e_k`
    E(u16),
    /// coordinate variable `x_j`
    Var(u16),
    /// the variable `x` introduced by the bar map
    Bar,
    /// `X` (index 0) or `X_a`
    Form(u8),
}

impl Symbol {
    /// Degree in the underlying `x` variables (`X` has degree zero here).
    pub fn x_degree(&self) -> i64 {
        match self {
            Symbol::E(k) => *k as i64,
            Symbol::Var(_) | Symbol::Bar => 1,
            Symbol::Form(_) => 0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Symbol::E(k) => format!("e{k}"),
            Symbol::Var(j) => format!("x{j}"),
            Symbol::Bar => "x".to_string(),
            Symbol::Form(0) => "X".to_string(),
            Symbol::Form(a) => format!("X{a}"),
        }
    }

    pub fn parse(s: &str) -> Result<Symbol> {
        let bad = || Error::Parse(format!("unknown symbol {s:?}"));
        if s == "x" {
            return Ok(Symbol::Bar);
        }
        if s == "X" {
            return Ok(Symbol::Form(0));
        }
        let (head, tail) = s.split_at(1);
        let idx: u16 = tail.parse().map_err(|_| bad())?;
        match head {
            "e" if idx >= 1 => Ok(Symbol::E(idx)),
            "x" if idx >= 1 => Ok(Symbol::Var(idx)),
            "X" if (1..256).contains(&idx) => Ok(Symbol::Form(idx as u8)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Which coordinate system the symmetric part of a polynomial uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rep {
    X,
    E,
}

/// Ordered list of symbols a polynomial is written in.
///
/// `arity` is the number of underlying variables `n` (so an E-REP space
/// with arity `n` may use `e_1..e_n`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub rep: Rep,
    pub arity: usize,
    pub symbols: Vec<Symbol>,
}

impl Space {
    pub fn x(n: usize) -> Arc<Space> {
        Self::x_with(n, &[])
    }

    pub fn x_with(n: usize, extras: &[Symbol]) -> Arc<Space> {
        let mut symbols: Vec<Symbol> = (1..=n as u16).map(Symbol::Var).collect();
        symbols.extend_from_slice(extras);
        Arc::new(Space { rep: Rep::X, arity: n, symbols })
    }

    pub fn e(n: usize) -> Arc<Space> {
        Self::e_with(n, &[])
    }

    pub fn e_with(n: usize, extras: &[Symbol]) -> Arc<Space> {
        let mut symbols: Vec<Symbol> = (1..=n as u16).map(Symbol::E).collect();
        symbols.extend_from_slice(extras);
        Arc::new(Space { rep: Rep::E, arity: n, symbols })
    }

    /// Target of the bar map on `R_n`: `e^{(n-2)}` with `x` adjoined.
    pub fn bar_target(n: usize) -> Arc<Space> {
        Self::e_with(n - 2, &[Symbol::Bar])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, s: &Symbol) -> Option<usize> {
        self.symbols.iter().position(|t| t == s)
    }

    /// Builds a space from symbol names, inferring representation and arity.
    pub fn from_names(names: &[String]) -> Result<Arc<Space>> {
        let symbols = names.iter().map(|s| Symbol::parse(s)).collect::<Result<Vec<_>>>()?;
        let has_e = symbols.iter().any(|s| matches!(s, Symbol::E(_)));
        let has_x = symbols.iter().any(|s| matches!(s, Symbol::Var(_)));
        if has_e && has_x {
            return Err(Error::Parse("mixed x and e symbols".into()));
        }
        let rep = if has_x { Rep::X } else { Rep::E };
        let arity = symbols
            .iter()
            .filter_map(|s| match s {
                Symbol::E(k) | Symbol::Var(k) => Some(*k as usize),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        Ok(Arc::new(Space { rep, arity, symbols }))
    }
}

pub(crate) fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
