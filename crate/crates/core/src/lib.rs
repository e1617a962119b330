//! Exact and asymptotic machinery around the double shuffle relations of
//! multiple zeta values.
//!
//! * [`hoffman`]: words over `{e0, e1}`, indices, rational linear combinations
//!   and the harmonic (`*`) and shuffle (`sh`) products.
//! * [`regularize`]: the decompositions `H¹ ≅ H⁰[T]` for both products and the
//!   maps `reg_*`, `reg_sh`.
//! * [`finitesum`]: exact rational evaluation of truncated sums
//!   (`ζ_{<N}`, `ζ♭_{<N}`, `ζ♮_{<N}`, `R_{<N}`) and brute-force oracles.
//! * [`numeric`]: floating evaluation of MZVs, multiple polylogarithms and
//!   log-corrected rate fitting.
//! * [`verify`]: verification campaigns, reports and the claim catalog.

pub mod error;
pub mod finitesum;
pub mod hoffman;
pub mod numeric;
pub mod regularize;
pub mod verify;

pub use error::{Error, Result};
pub use hoffman::{harmonic, shuffle, Index, Letter, LinComb, Word};
pub use num_rational::BigRational;
