//! `F_q`, `A = F_q[t]`, and truncated ramified Laurent series standing in
//! for `C_inf`, including the Carlitz period.

mod apoly;
mod gf;
mod series;
mod xi;

pub use apoly::{monic_of_degree, monic_polys, nonzero_polys, APoly};
pub use gf::{prime_power, FqElem, Gf, MAX_Q};
pub use series::{RamifiedSeries, EXACT};
pub use xi::{compute_xi, compute_xi_uncorrected, default_ramification, XiValue};
