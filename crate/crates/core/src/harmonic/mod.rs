//! Legendre residue certificates, the 24-vertex zonal multipliers, and the
//! real spherical-harmonic basis used for nearly spherical bodies.

pub mod legendre;
pub mod sph;
pub mod zonal;

pub use legendre::{
    bernstein_envelope, c_l, c_l_exact, certify_cl, legendre_f64, legendre_rational, rescaled_q,
    rescaled_q_mod16, rescaled_q_mod16_table, rescaled_q_table, weighted_residue_period8, residue_vanishing_start, BernsteinReport, ClCertificate,
    ClStatus, EXACT_LIMIT,
};
pub use sph::{real_sh, real_sh_all, sh_index, SphereQuadrature};
pub use zonal::{
    apply_multipliers, phi_inverse, phi_transform, zonal_spectrum, Expansion, MultiplierSpectrum,
};
