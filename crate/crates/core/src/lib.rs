//! Exact nearest-neighbour gap statistics for rotations on adelic tori.
//!
//! The orbit `ξ_n = nα + Γ_P` of a point `α` of the adele ring `A_P` is
//! computed with exact rational coordinates, and its nearest-neighbour
//! distances are counted. Two independent routes are provided: a direct
//! pairwise scan over the orbit ([`gaps`]) and a lattice reformulation that
//! reads the same distances off windowed short vectors ([`lattice`]).

pub mod adele;
pub mod arith;
mod error;
pub mod gaps;
pub mod lattice;
pub mod sharpness;
pub mod sweep;

pub use adele::{parse_point, AdelePoint, PrimeSet, TorusPoint};
pub use arith::Rational;
pub use error::{Error, Result};
pub use gaps::{gap_report, GapReport};
