//! Exact arithmetic on "complex polynomial × complex Gaussian" functions.
//!
//! Every operator the models need (multiplication by polynomials,
//! differentiation, complex translation, multiplication by `exp(uᵀx + c)`,
//! conjugation) maps this class into itself, so ladder families, vacua and
//! metric images can all be carried exactly up to floating-point rounding.

mod cpoly;
mod envelope;
mod fun;
mod multi_index;

pub use cpoly::{CPoly, PRUNE_REL};
pub use envelope::{min_real_part_eigenvalue, GaussEnvelope, MERGE_TOL, POS_DEF_MIN};
pub use fun::{PolyGaussFun, PolyGaussTerm};
pub use multi_index::MultiIndex;

#[cfg(test)]
mod tests;
