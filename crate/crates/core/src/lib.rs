//! Exact u-expansions of the rank-r Drinfeld discriminant over `A = F_q[t]`.
//!
//! The arithmetic is generic over the [`Ring`] trait; the aliases below name
//! the instances the library actually uses.

pub mod additive;
pub mod bench;
pub mod drinfeld;
pub mod error;
pub mod expansion;
pub mod field;
pub mod ring;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
pub use ring::Ring;

/// Rank-2 expansion: coefficients in `A`.
pub type Rank2Expansion = expansion::Expansion<field::APoly>;
/// Rank `r >= 3` expansion: coefficients in `A[g, Δ', 1/Δ']`.
pub type SymbolicExpansion = expansion::Expansion<symbolic::SymCoeff>;
/// Drinfeld module with exact polynomial coefficients (Carlitz).
pub type CarlitzModule = symbolic::GenericModule<field::APoly>;
/// Drinfeld module with symbolic coefficients `g_1, ..., g_{r-1}, Δ'`.
pub type SymbolicModule = symbolic::GenericModule<symbolic::SymCoeff>;
/// Drinfeld module with coefficients in the completion at infinity.
pub type NumericModule = symbolic::GenericModule<field::RamifiedSeries>;
/// Additive polynomial over the completion at infinity.
pub type NumericAdditivePoly = additive::AdditivePoly<field::RamifiedSeries>;
