//! Perturbative constructions around the critical covering lattice: the
//! circumradius expansion, covers of nearly spherical bodies, inextensibility
//! witnesses, and the rotation scan.

pub mod body;
pub mod circumradius;
pub mod cover;
pub mod scan;
pub mod witness;

pub use body::{rotation_grid, HarmonicTerm, RadialBody, RadialFunction, Rotated, Rotation};
pub use circumradius::{cr_after, cr_after_form, exact_cr_after, first_order_cr, CrAfter};
pub use cover::{
    build_cover, build_cover_with, solve_treqn, CoverConstruction, CoverSetup, Fit, Response, TranslationSolution, VertexCheck,
};
pub use scan::{harmonic_estimate, rotation_scan, ScanEntry, ScanReport, DEFAULT_GRID};
pub use witness::{
    extension_witness, extension_witness_from, member_augmented_ball, witness_at, AugmentedBall,
    ExtensionWitness,
};
