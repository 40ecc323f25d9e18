//! Sparse polynomials over the integers in two coordinate systems: the
//! variables `x_j` themselves (X-REP) and the elementary symmetric
//! generators `e_k` (E-REP), with the bar substitution between ranks.

mod json;
mod mpoly;
mod space;
mod symmetric;

pub use json::PolyJson;
pub use mpoly::{Exps, MPoly, Mono};
pub use space::{Rep, Space, Symbol};
pub use symmetric::{
    bar, bar_direct, delta_plus, delta_plus_e, e_sym, elementary, elementary_in, elementary_values, special_even,
    special_odd, specialize_e, to_e_rep, to_x_rep,
};
