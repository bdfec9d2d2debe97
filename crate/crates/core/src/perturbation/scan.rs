//! Scan the cover construction over rotations of a body and compare the best
//! determinant with the harmonic-domain prediction `−¼ Φ[ρ]`.
//!
//! For a rotation `U`, the constructed lattice covers `U(K)` with determinant
//! `det_ratio · d(Λ₀)`, so `Δ_K <= 1 − det_ratio · vol B / vol K`.

use rayon::prelude::*;

use super::body::{fibonacci_sphere, rotation_grid, RadialBody, RadialFunction, Rotated};
use super::cover::{build_cover_with, CoverSetup, Fit};
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::harmonic::legendre::c_l_exact;

pub const DEFAULT_GRID: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry {
    pub index: usize,
    pub quaternion: [f64; 4],
    pub det_ratio: f64,
    /// `trace M = Σ υ_i α_ij ρ_ij`.
    pub trace_m: f64,
    pub eps_prime: f64,
    /// `1 − det_ratio / (vol K / vol B)`.
    pub delta_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub grid_size: usize,
    pub eps: f64,
    pub volume_ratio: f64,
    pub rho_l1: f64,
    pub best: ScanEntry,
    /// Minimum over the grid of the linear bracket `−trace M`.
    pub min_linear_bracket: f64,
    /// `min_y −¼ Φ[ρ](y)`, sampled on a spherical Fibonacci set.
    pub harmonic_estimate: f64,
    /// `−best.delta_bound / ‖ρ‖₁`.
    pub empirical_c: f64,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    /// Upper bound on `Δ_K` from the best rotation.
    pub fn delta_k_bound(&self) -> f64 {
        self.best.delta_bound
    }
}

/// Multipliers `c_l` as floats for `l <= lmax`.
pub fn multipliers_f64(lmax: usize) -> Vec<f64> {
    (0..=lmax as u32).map(|l| to_f64(&c_l_exact(l))).collect()
}

/// `min_y −¼ Σ_l c_l ρ_l(y)` over `samples` directions.
pub fn harmonic_estimate(body: &RadialBody, samples: usize) -> f64 {
    let c = multipliers_f64(body.lmax());
    fibonacci_sphere(samples)
        .into_iter()
        .map(|y| -0.25 * body.multiplied(&c, y))
        .fold(f64::INFINITY, f64::min)
}

pub fn rotation_scan(body: &RadialBody, setup: &CoverSetup, grid_size: usize) -> Result<ScanReport> {
    if !body.is_normalized() {
        return Err(Error::Precondition(
            "body must have vanishing degree-0 and degree-2 components".into(),
        ));
    }
    if grid_size == 0 {
        return Err(Error::Precondition("rotation grid must be nonempty".into()));
    }
    let volume_ratio = body.volume_ratio();
    let grid = rotation_grid(grid_size);
    let entries: Vec<ScanEntry> = grid
        .par_iter()
        .enumerate()
        .map(|(index, &(quaternion, rotation))| {
            let rotated = Rotated { body, rotation };
            let c = build_cover_with(&rotated, setup, Fit::Boundary)?;
            let det_ratio = to_f64(&c.det_ratio);
            Ok(ScanEntry {
                index,
                quaternion,
                det_ratio,
                trace_m: to_f64(&c.trace_m),
                eps_prime: to_f64(&c.eps_prime),
                delta_bound: 1.0 - det_ratio / volume_ratio,
            })
        })
        .collect::<Result<_>>()?;
    let best = entries
        .iter()
        .min_by(|a, b| a.delta_bound.total_cmp(&b.delta_bound).then(a.index.cmp(&b.index)))
        .cloned()
        .expect("nonempty grid");
    let min_linear_bracket = entries.iter().map(|e| -e.trace_m).fold(f64::INFINITY, f64::min);
    let rho_l1 = body.l1_norm();
    let empirical_c = if rho_l1 > 0.0 { -best.delta_bound / rho_l1 } else { 0.0 };
    Ok(ScanReport {
        grid_size,
        eps: body.eps(),
        volume_ratio,
        rho_l1,
        harmonic_estimate: harmonic_estimate(body, 4 * grid_size.max(1000)),
        min_linear_bracket,
        empirical_c,
        best,
        entries,
    })
}
