//! Exact certificates for lattice coverings of space by balls and nearly
//! spherical bodies, built around the lattices A_n* for 2 <= n <= 5.

pub mod error;
pub mod exact;
pub mod harmonic;
pub mod eutaxy;
pub mod lattice;
pub mod perturbation;
pub mod certificate;

pub use error::{Error, Result};
