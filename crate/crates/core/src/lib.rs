//! Exact construction of the null-residue solution spaces `U_{n,l}` attached to
//! the level-zero rational qKZ system of sl2, together with machinery that
//! checks the associated determinant, spanning, character and resolution
//! identities by exact arithmetic.
//!
//! Polynomials live in [`poly`]; exterior forms over `H^(n)` in [`wedge`];
//! the explicit generators in [`construct`]; membership and determinants in
//! [`nullres`]; the rational combinatorics in [`combinat`]; q-series in
//! [`qchar`]; the two-term complex in [`resolution`].

pub mod combinat;
pub mod construct;
pub mod error;
pub mod linalg;
pub mod nullres;
pub mod poly;
pub mod qchar;
pub mod resolution;
pub mod verify;
pub mod wedge;

pub use error::{Error, Result};

/// Parity of the number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(vars: usize) -> Parity {
        if vars.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Largest variable count accepted by the expensive routines. The default
/// can be raised with the `QKZ_MAX_VARS` environment variable.
pub fn max_vars() -> usize {
    std::env::var("QKZ_MAX_VARS").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_VARS)
}

pub const DEFAULT_MAX_VARS: usize = 10;

/// Fails with [`Error::Budget`] when `vars` exceeds [`max_vars`].
pub fn max_vars_check(vars: usize) -> Result<()> {
    check_budget(vars)
}

pub(crate) fn check_budget(vars: usize) -> Result<()> {
    if vars > max_vars() {
        return Err(Error::Budget(format!("{vars} variables exceeds the limit of {} (set QKZ_MAX_VARS)", max_vars())));
    }
    Ok(())
}
