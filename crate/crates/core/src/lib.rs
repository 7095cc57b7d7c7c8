//! Exact arithmetic, actions and left-orderings for the solvable
//! Baumslag-Solitar groups `BS(1,n) = <a, b | b^-1 a b = a^n>`.
//!
//! Elements are kept in the normal form `a^r b^s` with `r` in `Z[1/n]`, acting
//! on the line by `x -> n^-s x + r`.

pub mod action;
pub mod cli;
pub mod cones;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod json;
pub mod numeric;
pub mod realization;
pub mod reals;
pub mod suite;
pub mod word;

pub use error::{Error, Result};
pub use group::{Group, GroupElement};
pub use numeric::{NAdic, Rat};
pub use reals::BasePoint;
