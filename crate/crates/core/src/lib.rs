//! Pseudo-bosonic ladder structures of non-self-adjoint quadratic
//! Hamiltonians, built and checked on the function class
//! "complex polynomial × complex Gaussian".

pub mod error;
pub mod gauss;
pub mod models;
pub mod polygauss;
pub mod probes;
pub mod par;
pub mod verify;
pub mod weyl;

pub use error::{PbError, Result};
pub use num_complex::Complex64 as C64;
