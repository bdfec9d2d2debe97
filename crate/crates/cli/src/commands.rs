use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use covering_core::certificate::{
    ball_class_certificate, cl_table_certificate, construct_certificate, lattice_certificate, witness_certificate,
    zonal_certificate, Certificate,
};
use covering_core::exact::parse_rat;
use covering_core::harmonic::ClStatus;
use covering_core::perturbation::{RadialBody, DEFAULT_GRID};

use crate::config::{Command, RunConfig};

pub const DEFAULT_LMAX_CL: u32 = 1000;
pub const DEFAULT_LMAX_ZONAL: u32 = 20;
pub const DEFAULT_EPS: &str = "1/100";

/// Result of a command: the certificate plus a short human-readable summary.
pub struct Outcome {
    pub certificate: Certificate,
    pub summary: Vec<String>,
    /// Extra files to write next to the JSON output.
    pub mirrors: Vec<(PathBuf, String)>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::BallClass => ball_class(cfg.require_dim()?),
        Command::Anstar => anstar(cfg.require_dim()?),
        Command::Construct => construct(cfg),
        Command::Witness => witness(cfg),
        Command::ClCertify => cl_certify(cfg),
        Command::Zonal => zonal(cfg.lmax.unwrap_or(DEFAULT_LMAX_ZONAL)),
        Command::Verify => verify(cfg.certificate.as_deref().context("--certificate is required")?),
    }
}

fn outcome(certificate: Certificate, summary: Vec<String>) -> Outcome {
    Outcome {
        certificate,
        summary,
        mirrors: Vec::new(),
    }
}

fn ball_class(dim: usize) -> Result<Outcome> {
    let c = ball_class_certificate(dim)?;
    let summary = vec![
        format!("A_{dim}*: {} maximal simplices in {} ± pairs, cr² = {}", c.simplices.len(), c.pairs.len(), c.mu2),
        format!("classification: {:?}", c.classification),
        format!("conclusion: {}", c.conclusion),
    ];
    Ok(outcome(Certificate::BallClass(c), summary))
}

fn anstar(dim: usize) -> Result<Outcome> {
    let c = lattice_certificate(dim)?;
    let summary = vec![
        format!("A_{dim}*: det(gram) = {}, cr² = {}", c.det_gram, c.mu2),
        format!(
            "{} Delone classes, {} maximal, {} Voronoi vertices, generic: {}",
            c.delone_classes,
            c.maximal_simplices.len(),
            c.voronoi_vertices,
            c.generic
        ),
        format!("ball covering density: {}", c.ball_density),
    ];
    Ok(outcome(Certificate::Lattice(c), summary))
}

fn construct(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg.body.as_deref().context("--body is required")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading body {}", path.display()))?;
    let body = RadialBody::from_json(&text).with_context(|| format!("parsing body {}", path.display()))?;
    let grid = cfg.grid.unwrap_or(DEFAULT_GRID);
    let c = construct_certificate(&body, grid)?;
    let summary = vec![
        format!("eps = {}, vol K / vol B = {}", c.eps, c.volume_ratio),
        format!("identity: det ratio {} (δ = {})", c.identity.det_ratio, c.identity.delta),
        format!("best of {grid} rotations: index {}", c.best.rotation_index),
        format!("Δ_K bound: {}", c.delta_k_bound),
        format!("harmonic estimate: {}", c.harmonic_estimate),
        format!(
            "covering density {} vs ball {} ({})",
            c.constructed_density,
            c.ball_density,
            if c.below_ball_density { "below" } else { "not below" }
        ),
    ];
    Ok(outcome(Certificate::Construct(c), summary))
}

fn witness(cfg: &RunConfig) -> Result<Outcome> {
    let dim = cfg.require_dim()?;
    let pair = cfg.pair.context("--pair is required")?;
    let eps = parse_rat(cfg.eps.as_deref().unwrap_or(DEFAULT_EPS))?;
    let c = witness_certificate(dim, pair, &eps)?;
    let summary = vec![
        format!("pair {pair} removed, eps = {}", c.eps),
        format!("s = {}, det T = {}", c.s, c.det_t),
        format!("translation τ = {} along vertex {}", c.tau, c.pole_vertex),
    ];
    Ok(outcome(Certificate::Witness(c), summary))
}

fn cl_certify(cfg: &RunConfig) -> Result<Outcome> {
    let lmax = cfg.lmax.unwrap_or(DEFAULT_LMAX_CL);
    let c = cl_table_certificate(lmax)?;
    let exact = c.rows.iter().filter(|r| r.status == ClStatus::NonzeroExact).count();
    let by_residue = c.rows.iter().filter(|r| r.status == ClStatus::NonzeroMod16).count();
    let summary = vec![
        format!("c_l for 0 <= l <= {lmax}: zero at {:?}", c.zero_degrees),
        format!("{exact} nonzero by exact value, {by_residue} by residue mod 16"),
    ];
    let mirrors = cfg
        .out
        .as_ref()
        .map(|p| vec![(p.with_extension("csv"), c.to_csv())])
        .unwrap_or_default();
    Ok(Outcome {
        certificate: Certificate::ClTable(c),
        summary,
        mirrors,
    })
}

fn zonal(lmax: u32) -> Result<Outcome> {
    let c = zonal_certificate(lmax)?;
    let summary = vec![
        format!("multipliers up to degree {lmax} about vertex {}", c.pole),
        format!("odd degrees vanish: {}, even degrees equal c_l: {}", c.odd_vanish, c.even_match),
    ];
    Ok(outcome(Certificate::Zonal(c), summary))
}

fn verify(path: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let certificate = Certificate::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let kind = match &certificate {
        Certificate::Lattice(_) => "lattice",
        Certificate::BallClass(_) => "ball-class",
        Certificate::Witness(_) => "witness",
        Certificate::Construct(_) => "construct",
        Certificate::ClTable(_) => "cl-table",
        Certificate::Zonal(_) => "zonal",
    };
    Ok(outcome(certificate, vec![format!("{kind} certificate {}", path.display())]))
}
