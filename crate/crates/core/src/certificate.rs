//! Serializable certificates and their re-verification.
//!
//! Exact quantities travel as `"p/q"` strings and floats as fixed-precision
//! strings, so identical runs produce byte-identical JSON. Every certificate
//! can be checked again from its own contents by [`Certificate::verify`].

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eutaxy::{analyze, q_map, Classification, EutaxyMap, EutaxyReport, PairCertificate};
use crate::exact::{fmt_rat, fmt_vec, one, parse_rat, parse_vec, pow, to_f64, MatQ, Rat, SymMapQ, VecQ};
use crate::harmonic::legendre::{
    c_l_exact, certify_cl, rescale_factor, residue_vanishing_start, weighted_residue_period8, ClStatus,
};
use crate::harmonic::zonal::zonal_spectrum;
use crate::lattice::{
    anstar_gram, build_anstar, covering_radius, genericity_check, voronoi_vertices, LatticeModel,
    PrimitiveSimplex,
};
use crate::perturbation::{
    build_cover_with, member_augmented_ball, rotation_grid, rotation_scan, AugmentedBall, CoverConstruction,
    CoverSetup, ExtensionWitness, Fit, HarmonicTerm, RadialBody, RadialFunction, Rotated,
    Rotation,
};

pub type MatStr = Vec<Vec<String>>;

/// Relative tolerance when comparing re-evaluated floats.
pub const FLOAT_TOL: f64 = 1e-12;

/// Degrees over which the residue rows are checked for 8-periodicity.
pub const RESIDUE_CHECK_HORIZON: u32 = 1000;

/// Fixed-precision rendering used for every float in a report.
pub fn fixed(x: f64) -> String {
    format!("{x:.12e}")
}

fn parse_fixed(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Verification(format!("malformed float {s:?}")))
}

fn fmt_mat(m: &MatQ) -> MatStr {
    m.to_rows().iter().map(|r| fmt_vec(r)).collect()
}

fn fmt_form(f: &SymMapQ) -> MatStr {
    fmt_mat(&f.to_mat())
}

fn fmt_vecs(v: &[VecQ]) -> Vec<Vec<String>> {
    v.iter().map(|x| fmt_vec(x)).collect()
}

fn parse_mat(m: &MatStr) -> Result<MatQ> {
    MatQ::from_rows(m.iter().map(|r| parse_vec(r)).collect::<Result<_>>()?)
}

fn parse_form(m: &MatStr) -> Result<SymMapQ> {
    SymMapQ::from_mat(&parse_mat(m)?)
}

fn parse_vecs(v: &[Vec<String>]) -> Result<Vec<VecQ>> {
    v.iter().map(|x| parse_vec(x)).collect()
}

fn check(cond: bool, what: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(what.into()))
    }
}

fn close(stored: &str, fresh: f64, what: &str) -> Result<()> {
    let v = parse_fixed(stored)?;
    check(
        (v - fresh).abs() <= FLOAT_TOL * fresh.abs().max(1.0),
        format!("{what}: stored {stored}, recomputed {}", fixed(fresh)),
    )
}

fn supported_dim(dim: usize) -> Result<()> {
    if (2..=5).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Lattice(LatticeCertificate),
    BallClass(BallClassCertificate),
    Witness(WitnessCertificate),
    Construct(ConstructCertificate),
    ClTable(ClTableCertificate),
    Zonal(ZonalCertificate),
}

impl Certificate {
    pub fn verify(&self) -> Result<()> {
        match self {
            Certificate::Lattice(c) => c.verify(),
            Certificate::BallClass(c) => c.verify(),
            Certificate::Witness(c) => c.verify(),
            Certificate::Construct(c) => c.verify(),
            Certificate::ClTable(c) => c.verify(),
            Certificate::Zonal(c) => c.verify(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexRecord {
    /// Vertices relative to the circumcenter, in lattice coordinates.
    pub vertices: Vec<Vec<String>>,
    pub alpha: Vec<String>,
    pub cr2: String,
}

impl SimplexRecord {
    fn new(s: &PrimitiveSimplex) -> Self {
        SimplexRecord {
            vertices: fmt_vecs(&s.x),
            alpha: fmt_vec(&s.alpha),
            cr2: fmt_rat(&s.cr2),
        }
    }

    fn parse(&self, source: usize) -> Result<PrimitiveSimplex> {
        Ok(PrimitiveSimplex {
            x: parse_vecs(&self.vertices)?,
            alpha: parse_vec(&self.alpha)?,
            cr2: parse_rat(&self.cr2)?,
            source,
        })
    }
}

fn sorted_vertices(s: &PrimitiveSimplex) -> Vec<VecQ> {
    let mut v = s.x.clone();
    v.sort();
    v
}

/// Parse the listed simplices and check them against a fresh computation of
/// `X(A_n*)`: same covering radius, same vertex sets, valid barycentric data.
fn check_maximal_simplices(lat: &LatticeModel, mu2: &str, records: &[SimplexRecord]) -> Result<(Rat, Vec<PrimitiveSimplex>)> {
    let mu2 = parse_rat(mu2)?;
    let simplices: Vec<PrimitiveSimplex> = records
        .iter()
        .enumerate()
        .map(|(i, r)| r.parse(i))
        .collect::<Result<_>>()?;
    for (i, s) in simplices.iter().enumerate() {
        check(s.x.len() == lat.n + 1, format!("simplex {i} has the wrong vertex count"))?;
        check(s.check(&lat.gram), format!("simplex {i} fails the circumcenter identities"))?;
        check(s.cr2 == mu2, format!("simplex {i} is not maximal"))?;
    }
    let (fresh_mu2, fresh) = covering_radius(lat)?;
    check(fresh_mu2 == mu2, "covering radius mismatch")?;
    let mut a: Vec<_> = simplices.iter().map(sorted_vertices).collect();
    let mut b: Vec<_> = fresh.iter().map(sorted_vertices).collect();
    a.sort();
    b.sort();
    check(a == b, "listed simplices differ from X")?;
    Ok((mu2, simplices))
}

/// `vol B^n` for the unit ball.
fn unit_ball_volume(n: usize) -> f64 {
    let pi = std::f64::consts::PI;
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * pi / n as f64,
    }
}

/// `vol B(√mu2) / sqrt(det gram)`.
pub fn density_from(n: usize, mu2: &Rat, det_gram: &Rat) -> f64 {
    unit_ball_volume(n) * to_f64(mu2).powf(n as f64 / 2.0) / to_f64(det_gram).sqrt()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCertificate {
    pub dim: usize,
    pub gram: MatStr,
    pub embedding: Option<MatStr>,
    pub det_gram: String,
    pub mu2: String,
    pub delone_classes: usize,
    pub maximal_simplices: Vec<SimplexRecord>,
    pub voronoi_vertices: usize,
    pub generic: bool,
    pub ball_density: String,
    pub float_tolerance: String,
}

pub fn lattice_certificate(dim: usize) -> Result<LatticeCertificate> {
    let lat = build_anstar(dim)?;
    let (mu2, x) = covering_radius(&lat)?;
    let det = lat.det_gram();
    Ok(LatticeCertificate {
        dim,
        gram: fmt_form(&lat.gram),
        embedding: lat.embedding.as_ref().map(fmt_mat),
        det_gram: fmt_rat(&det),
        mu2: fmt_rat(&mu2),
        delone_classes: lat.delone_classes.len(),
        maximal_simplices: x.iter().map(SimplexRecord::new).collect(),
        voronoi_vertices: voronoi_vertices(&lat)?.len(),
        generic: genericity_check(&lat)?,
        ball_density: fixed(density_from(dim, &mu2, &det)),
        float_tolerance: fixed(FLOAT_TOL),
    })
}

impl LatticeCertificate {
    pub fn verify(&self) -> Result<()> {
        supported_dim(self.dim)?;
        let gram = parse_form(&self.gram)?;
        check(gram == anstar_gram(self.dim), "Gram matrix is not that of A_n*")?;
        if let Some(e) = &self.embedding {
            let e = parse_mat(e)?;
            check(e.transpose().mul(&e)? == gram.to_mat(), "embedding does not reproduce the Gram matrix")?;
        }
        let det = parse_rat(&self.det_gram)?;
        check(gram.to_mat().det()? == det, "det(gram) mismatch")?;
        let lat = build_anstar(self.dim)?;
        check(lat.delone_classes.len() == self.delone_classes, "Delone class count mismatch")?;
        let (mu2, _) = check_maximal_simplices(&lat, &self.mu2, &self.maximal_simplices)?;
        check(voronoi_vertices(&lat)?.len() == self.voronoi_vertices, "Voronoi vertex count mismatch")?;
        check(genericity_check(&lat)? == self.generic, "genericity flag mismatch")?;
        close(&self.ball_density, density_from(self.dim, &mu2, &det), "ball density")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RemovalRecord {
    Feasible { coefficients: Vec<String> },
    Farkas { form: MatStr },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallClassCertificate {
    pub dim: usize,
    pub gram: MatStr,
    pub mu2: String,
    pub simplices: Vec<SimplexRecord>,
    /// Indices `(i, j)` into `simplices` with `S_j = −S_i`.
    pub pairs: Vec<(usize, usize)>,
    /// Normalized eutaxy forms, one per pair.
    pub maps: Vec<MatStr>,
    pub classification: Classification,
    pub coefficients: Option<Vec<String>>,
    pub farkas: Option<MatStr>,
    pub removals: Vec<RemovalRecord>,
    pub unique: bool,
    pub positive: bool,
    pub conclusion: String,
}

pub fn conclusion(c: Classification) -> &'static str {
    match c {
        Classification::NotSemiEutactic => "ball is not a locally optimal covering shape for this lattice",
        Classification::SemiEutactic => "ball inextensible",
        Classification::CriticallySemiEutactic => "ball inextensible; relatively worst covering candidate",
        Classification::RedundantlySemiEutactic => "ball extensible",
    }
}

pub fn ball_class_certificate(dim: usize) -> Result<BallClassCertificate> {
    let a = analyze(build_anstar(dim)?)?;
    let r = &a.report;
    Ok(BallClassCertificate {
        dim,
        gram: fmt_form(&a.lattice.gram),
        mu2: fmt_rat(&a.mu2),
        simplices: a.simplices.iter().map(SimplexRecord::new).collect(),
        pairs: a.pairs.clone(),
        maps: a.maps.iter().map(|m| fmt_form(&m.form)).collect(),
        classification: r.classification,
        coefficients: r.coefficients.as_ref().map(|c| fmt_vec(c)),
        farkas: r.farkas.as_ref().map(fmt_form),
        removals: r
            .removals
            .iter()
            .map(|p| match p {
                PairCertificate::Feasible { coeffs } => RemovalRecord::Feasible {
                    coefficients: fmt_vec(coeffs),
                },
                PairCertificate::Farkas { form } => RemovalRecord::Farkas { form: fmt_form(form) },
            })
            .collect(),
        unique: r.unique,
        positive: r.positive,
        conclusion: conclusion(r.classification).to_string(),
    })
}

impl BallClassCertificate {
    pub fn verify(&self) -> Result<()> {
        supported_dim(self.dim)?;
        let gram = parse_form(&self.gram)?;
        check(gram == anstar_gram(self.dim), "Gram matrix is not that of A_n*")?;
        let lat = build_anstar(self.dim)?;
        let (_, simplices) = check_maximal_simplices(&lat, &self.mu2, &self.simplices)?;

        let mut seen = vec![0usize; simplices.len()];
        for &(i, j) in &self.pairs {
            check(i < simplices.len() && j < simplices.len(), "pair index out of range")?;
            check(simplices[j].is_negative_of(&simplices[i]), format!("pair ({i}, {j}) is not a ± pair"))?;
            seen[i] += 1;
            if i != j {
                seen[j] += 1;
            }
        }
        check(seen.iter().all(|&c| c == 1), "pairs do not partition the simplices")?;
        check(self.maps.len() == self.pairs.len(), "one map per pair expected")?;
        let maps: Vec<EutaxyMap> = self
            .pairs
            .iter()
            .zip(&self.maps)
            .map(|(&(i, _), stored)| {
                let m = q_map(&simplices[i], i, true);
                check(parse_form(stored)? == m.form, format!("eutaxy map of simplex {i} mismatch"))?;
                Ok(m)
            })
            .collect::<Result<_>>()?;

        let removals = self
            .removals
            .iter()
            .map(|r| {
                Ok(match r {
                    RemovalRecord::Feasible { coefficients } => PairCertificate::Feasible {
                        coeffs: parse_vec(coefficients)?,
                    },
                    RemovalRecord::Farkas { form } => PairCertificate::Farkas { form: parse_form(form)? },
                })
            })
            .collect::<Result<_>>()?;
        let coefficients = self.coefficients.as_ref().map(|c| parse_vec(c)).transpose()?;
        let report = EutaxyReport {
            classification: self.classification,
            coefficients: coefficients.clone(),
            farkas: self.farkas.as_ref().map(parse_form).transpose()?,
            removals,
            unique: self.unique,
            positive: self.positive,
        };
        report.verify(&maps, &gram)?;

        let columns: Vec<VecQ> = maps.iter().map(|m| m.form.upper()).collect();
        let rank = MatQ::from_cols(&columns)?.rank();
        if coefficients.is_some() {
            check(self.unique == (rank == maps.len()), "uniqueness flag does not match the rank of the maps")?;
            let positive = coefficients.iter().flatten().all(|c| c.is_positive());
            check(self.positive == positive, "positivity flag mismatch")?;
        }
        check(self.conclusion == conclusion(self.classification), "conclusion does not match the classification")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub dim: usize,
    /// Index of the removed ± pair.
    pub pair: usize,
    pub simplex: (usize, usize),
    pub eps: String,
    pub farkas: MatStr,
    pub s: String,
    pub t: MatStr,
    pub det_t: String,
    pub kept_cr2: Vec<(usize, String)>,
    pub mu2: String,
    pub pole: Vec<String>,
    pub ball_radius2: String,
    pub pole_vertex: usize,
    pub tau: String,
    pub placed: Vec<Vec<String>>,
    pub members: Vec<bool>,
}

pub fn witness_certificate(dim: usize, pair: usize, eps: &Rat) -> Result<WitnessCertificate> {
    let lat = build_anstar(dim)?;
    let w = crate::perturbation::extension_witness(&lat, pair, eps)?;
    Ok(WitnessCertificate::new(dim, &w))
}

impl WitnessCertificate {
    pub fn new(dim: usize, w: &ExtensionWitness) -> Self {
        WitnessCertificate {
            dim,
            pair: w.removed,
            simplex: w.simplex,
            eps: fmt_rat(&w.ball.eps),
            farkas: fmt_form(&w.farkas),
            s: fmt_rat(&w.s),
            t: fmt_mat(&w.t),
            det_t: fmt_rat(&w.det_t),
            kept_cr2: w.kept_cr2.iter().map(|(i, c)| (*i, fmt_rat(c))).collect(),
            mu2: fmt_rat(&w.mu2),
            pole: fmt_vec(&w.ball.pole),
            ball_radius2: fmt_rat(&w.ball.radius2),
            pole_vertex: w.pole_vertex,
            tau: fmt_rat(&w.tau),
            placed: fmt_vecs(&w.placed),
            members: w.members.clone(),
        }
    }

    pub fn parse(&self, gram: &SymMapQ) -> Result<ExtensionWitness> {
        Ok(ExtensionWitness {
            removed: self.pair,
            simplex: self.simplex,
            farkas: parse_form(&self.farkas)?,
            s: parse_rat(&self.s)?,
            t: parse_mat(&self.t)?,
            det_t: parse_rat(&self.det_t)?,
            kept_cr2: self
                .kept_cr2
                .iter()
                .map(|(i, c)| Ok((*i, parse_rat(c)?)))
                .collect::<Result<_>>()?,
            mu2: parse_rat(&self.mu2)?,
            ball: AugmentedBall {
                eps: parse_rat(&self.eps)?,
                pole: parse_vec(&self.pole)?,
                radius2: parse_rat(&self.ball_radius2)?,
                gram: gram.clone(),
            },
            pole_vertex: self.pole_vertex,
            tau: parse_rat(&self.tau)?,
            placed: parse_vecs(&self.placed)?,
            members: self.members.clone(),
        })
    }

    pub fn verify(&self) -> Result<()> {
        supported_dim(self.dim)?;
        let lat = build_anstar(self.dim)?;
        let w = self.parse(&lat.gram)?;
        let n = lat.n;
        check(w.s.is_positive(), "step s must be positive")?;
        check(w.t.rows() == n && w.t.cols() == n, "T has the wrong shape")?;
        check(w.t.det()? == w.det_t, "det T mismatch")?;
        check(w.det_t > one(), "det T must exceed 1")?;
        check(w.kept_cr2.iter().all(|(_, c)| *c < w.mu2), "a kept simplex does not shrink")?;
        check(w.placed.len() == n + 1 && w.members.len() == n + 1, "placed simplex has the wrong size")?;
        for (k, q) in w.placed.iter().enumerate() {
            check(
                w.members[k] && member_augmented_ball(q, &w.ball),
                format!("vertex {k} lies outside the augmented ball"),
            )?;
        }
        w.verify(&lat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub fit: Fit,
    /// Index into the rotation grid; 0 is the identity.
    pub rotation_index: usize,
    pub rho: Vec<Vec<String>>,
    pub rho_fit: Vec<Vec<String>>,
    /// `M` in Euclidean coordinates.
    pub m: MatStr,
    pub t: Vec<Vec<String>>,
    pub delta: String,
    pub det_linear_map: String,
    pub det_ratio: String,
    pub trace_m: String,
    pub sum_abs_rho: String,
    pub eps_prime: String,
    pub linear_bound: String,
    pub theorem_bound: String,
    pub lattice_gram: MatStr,
    pub max_delta_ij: String,
    pub delta_tangent: String,
    pub radial_tolerance: String,
    pub all_inside: bool,
    pub meets_theorem_bound: bool,
}

impl CoverRecord {
    fn new(c: &CoverConstruction, rotation_index: usize) -> Self {
        CoverRecord {
            fit: c.fit,
            rotation_index,
            rho: fmt_vecs(&c.rho),
            rho_fit: fmt_vecs(&c.rho_fit),
            m: fmt_form(&c.m),
            t: fmt_vecs(&c.t),
            delta: fmt_rat(&c.delta),
            det_linear_map: fmt_rat(&c.det_linear_map),
            det_ratio: fmt_rat(&c.det_ratio),
            trace_m: fmt_rat(&c.trace_m),
            sum_abs_rho: fmt_rat(&c.sum_abs_rho),
            eps_prime: fmt_rat(&c.eps_prime),
            linear_bound: fmt_rat(&c.linear_bound),
            theorem_bound: fmt_rat(&c.theorem_bound),
            lattice_gram: fmt_form(&c.lattice_out.gram),
            max_delta_ij: fixed(c.max_delta_ij),
            delta_tangent: fixed(c.delta_tangent),
            radial_tolerance: fixed(c.tolerance),
            all_inside: c.all_inside(),
            meets_theorem_bound: c.meets_theorem_bound(),
        }
    }

    /// Exact identities that hold between the stored fields themselves.
    fn check_identities(&self, what: &str) -> Result<()> {
        let m = parse_form(&self.m)?;
        let delta = parse_rat(&self.delta)?;
        let d = MatQ::identity(m.dim()).add(&m.to_mat()).det()?;
        let fail = |s: &str| Error::Verification(format!("{what}: {s}"));
        if d != parse_rat(&self.det_linear_map)? {
            return Err(fail("det(Id + M) mismatch"));
        }
        let ratio = pow(&(one() - &delta), m.dim() as u32) * &d;
        if ratio != parse_rat(&self.det_ratio)? {
            return Err(fail("det_ratio is not (1 − δ)^n det(Id + M)"));
        }
        if m.trace() != parse_rat(&self.trace_m)? {
            return Err(fail("trace M mismatch"));
        }
        let bound = parse_rat(&self.linear_bound)? - parse_rat(&self.eps_prime)? * parse_rat(&self.sum_abs_rho)?;
        if bound != parse_rat(&self.theorem_bound)? {
            return Err(fail("theorem bound is not 1 + linear term − ε′ Σ|ρ|"));
        }
        if self.meets_theorem_bound != (ratio >= bound) || !self.all_inside || !self.meets_theorem_bound {
            return Err(fail("cover does not satisfy its checks"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructCertificate {
    pub body: Vec<HarmonicTerm>,
    pub eps: String,
    pub volume_ratio: String,
    pub rho_l1: String,
    /// The construction applied to the body as given.
    pub identity: CoverRecord,
    pub grid: usize,
    /// The construction at the best rotation of the scan.
    pub best: CoverRecord,
    pub best_quaternion: Vec<String>,
    /// Upper bound on `Δ_K` from the best rotation.
    pub delta_k_bound: String,
    pub min_linear_bracket: String,
    pub harmonic_estimate: String,
    pub empirical_c: String,
    pub ball_density: String,
    pub constructed_density: String,
    pub below_ball_density: bool,
    pub float_tolerance: String,
}

fn a3_setup() -> Result<CoverSetup> {
    CoverSetup::new(&build_anstar(3)?)
}

fn rotation_at(grid: usize, index: usize) -> Result<([f64; 4], Rotation)> {
    rotation_grid(grid)
        .get(index)
        .copied()
        .ok_or_else(|| Error::Verification(format!("rotation index {index} outside a grid of {grid}")))
}

pub fn construct_certificate(body: &RadialBody, grid: usize) -> Result<ConstructCertificate> {
    let setup = a3_setup()?;
    let identity = build_cover_with(body, &setup, Fit::Linear)?;
    let scan = rotation_scan(body, &setup, grid)?;
    let (q, rotation) = rotation_at(grid, scan.best.index)?;
    let best = build_cover_with(&Rotated { body, rotation }, &setup, Fit::Boundary)?;
    let lat = &setup.lattice;
    let ball_density = density_from(3, &setup.mu2, &lat.det_gram());
    let det_ratio = to_f64(&best.det_ratio);
    let constructed_density = ball_density * scan.volume_ratio / det_ratio;
    Ok(ConstructCertificate {
        body: body.terms(),
        eps: fixed(body.eps()),
        volume_ratio: fixed(scan.volume_ratio),
        rho_l1: fixed(scan.rho_l1),
        identity: CoverRecord::new(&identity, 0),
        grid,
        best: CoverRecord::new(&best, scan.best.index),
        best_quaternion: q.iter().map(|&x| fixed(x)).collect(),
        delta_k_bound: fixed(scan.delta_k_bound()),
        min_linear_bracket: fixed(scan.min_linear_bracket),
        harmonic_estimate: fixed(scan.harmonic_estimate),
        empirical_c: fixed(scan.empirical_c),
        ball_density: fixed(ball_density),
        constructed_density: fixed(constructed_density),
        below_ball_density: constructed_density < ball_density,
        float_tolerance: fixed(FLOAT_TOL),
    })
}

impl ConstructCertificate {
    pub fn verify(&self) -> Result<()> {
        let body = RadialBody::from_terms(&self.body)?;
        self.identity.check_identities("identity cover")?;
        self.best.check_identities("best cover")?;
        check(self.identity.rotation_index == 0 && self.identity.fit == Fit::Linear, "identity record mislabelled")?;
        check(self.best.fit == Fit::Boundary, "best record must use the boundary fit")?;

        let setup = a3_setup()?;
        let identity = build_cover_with(&body, &setup, Fit::Linear)?;
        check(CoverRecord::new(&identity, 0) == self.identity, "identity cover differs from its recomputation")?;

        let scan = rotation_scan(&body, &setup, self.grid)?;
        check(scan.best.index == self.best.rotation_index, "best rotation differs from a rescan")?;
        let (q, rotation) = rotation_at(self.grid, self.best.rotation_index)?;
        let best = build_cover_with(&Rotated { body: &body, rotation }, &setup, Fit::Boundary)?;
        check(CoverRecord::new(&best, scan.best.index) == self.best, "best cover differs from its recomputation")?;
        for (s, x) in self.best_quaternion.iter().zip(q) {
            close(s, x, "quaternion")?;
        }

        let volume_ratio = body.volume_ratio();
        close(&self.volume_ratio, volume_ratio, "volume ratio")?;
        close(&self.eps, body.eps(), "eps")?;
        close(&self.rho_l1, body.l1_norm(), "‖ρ‖₁")?;
        let det_ratio = to_f64(&parse_rat(&self.best.det_ratio)?);
        close(&self.delta_k_bound, 1.0 - det_ratio / volume_ratio, "Δ_K bound")?;
        close(&self.min_linear_bracket, scan.min_linear_bracket, "linear bracket")?;
        close(&self.harmonic_estimate, scan.harmonic_estimate, "harmonic estimate")?;
        close(&self.empirical_c, scan.empirical_c, "empirical constant")?;
        let ball_density = density_from(3, &setup.mu2, &setup.lattice.det_gram());
        close(&self.ball_density, ball_density, "ball density")?;
        let constructed = ball_density * volume_ratio / det_ratio;
        close(&self.constructed_density, constructed, "constructed density")?;
        check(self.below_ball_density == (constructed < ball_density), "density comparison flag mismatch")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClRow {
    pub l: u32,
    pub value: Option<String>,
    /// `5^l · l! · c_l mod 16`.
    pub residue: u8,
    pub status: ClStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClTableCertificate {
    pub lmax: u32,
    pub rows: Vec<ClRow>,
    /// `(k, w_k Q_l(k/5) mod 16 for l ≡ 0..7 mod 8)` for `k = 0, 2, 4`.
    pub weighted_residue_rows: Vec<(i64, [u8; 8])>,
    /// `(k, l)`: from degree `l` on, `Q_l(k/5) ≡ 0 (mod 16)`, for `k = 1, 3, 5`.
    pub vanishing_from: Vec<(i64, u32)>,
    pub zero_degrees: Vec<u32>,
}

fn residue_facts(lmax: u32) -> Result<(Vec<(i64, [u8; 8])>, Vec<(i64, u32)>)> {
    let horizon = lmax.max(RESIDUE_CHECK_HORIZON);
    let rows = [0, 2, 4]
        .into_iter()
        .map(|k| {
            weighted_residue_period8(k, horizon)
                .map(|r| (k, r))
                .ok_or_else(|| Error::Verification(format!("residues at k = {k} are not 8-periodic")))
        })
        .collect::<Result<_>>()?;
    let vanishing = [1, 3, 5]
        .into_iter()
        .map(|k| {
            residue_vanishing_start(k, horizon)
                .map(|l| (k, l))
                .ok_or_else(|| Error::Verification(format!("residues at k = {k} do not vanish")))
        })
        .collect::<Result<_>>()?;
    Ok((rows, vanishing))
}

pub fn cl_table_certificate(lmax: u32) -> Result<ClTableCertificate> {
    let certs = certify_cl(lmax);
    let (weighted_residue_rows, vanishing_from) = residue_facts(lmax)?;
    Ok(ClTableCertificate {
        lmax,
        zero_degrees: certs.iter().filter(|c| c.status == ClStatus::Zero).map(|c| c.l).collect(),
        rows: certs
            .iter()
            .map(|c| ClRow {
                l: c.l,
                value: c.value.as_ref().map(fmt_rat),
                residue: c.residue,
                status: c.status,
            })
            .collect(),
        weighted_residue_rows,
        vanishing_from,
    })
}

impl ClTableCertificate {
    pub fn verify(&self) -> Result<()> {
        check(self.rows.len() == self.lmax as usize + 1, "one row per degree expected")?;
        for (l, row) in self.rows.iter().enumerate() {
            check(row.l as usize == l, format!("row {l} is out of order"))?;
            match (&row.value, row.status) {
                (Some(v), status) => {
                    let v = parse_rat(v)?;
                    check(v == c_l_exact(row.l), format!("c_{l} value mismatch"))?;
                    let scaled = &v * Rat::from_integer(rescale_factor(row.l));
                    check(scaled.is_integer(), format!("5^l l! c_{l} is not an integer"))?;
                    let r = scaled.to_integer().mod_floor_16();
                    check(r == row.residue, format!("residue of c_{l} disagrees with its exact value"))?;
                    let expected = if v.is_zero() { ClStatus::Zero } else { ClStatus::NonzeroExact };
                    check(status == expected, format!("status of c_{l} mismatch"))?;
                }
                (None, ClStatus::NonzeroMod16) => {
                    check(l >= 6 && row.residue != 0, format!("c_{l} lacks a valid residue certificate"))?;
                }
                (None, _) => return Err(Error::Verification(format!("c_{l} is not certified"))),
            }
        }
        let fresh = cl_table_certificate(self.lmax)?;
        check(fresh.rows == self.rows, "rows differ from a recomputation")?;
        check(fresh.weighted_residue_rows == self.weighted_residue_rows, "residue rows mismatch")?;
        check(fresh.vanishing_from == self.vanishing_from, "vanishing degrees mismatch")?;
        let zeros: Vec<u32> = self.rows.iter().filter(|r| r.status == ClStatus::Zero).map(|r| r.l).collect();
        check(zeros == self.zero_degrees, "zero degree list mismatch")
    }

    /// `l,c_l,residue_mod16,status` with one line per degree.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,c_l,residue_mod16,status\n");
        for r in &self.rows {
            let status = match r.status {
                ClStatus::Zero => "zero",
                ClStatus::NonzeroExact => "nonzero-exact",
                ClStatus::NonzeroMod16 => "nonzero-mod16",
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.l,
                r.value.as_deref().unwrap_or(""),
                r.residue,
                status
            ));
        }
        out
    }
}

trait Mod16 {
    fn mod_floor_16(&self) -> u8;
}

impl Mod16 for BigInt {
    fn mod_floor_16(&self) -> u8 {
        let r = self % BigInt::from(16);
        let r = if r.is_negative() { r + 16 } else { r };
        r.to_u8().expect("residue below 16")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZonalCertificate {
    pub lmax: u32,
    /// The 24 Voronoi vertices of `A_3*` in Euclidean coordinates.
    pub vertices: Vec<Vec<String>>,
    pub pole: usize,
    /// Normalized inner products with the pole and their multiplicities.
    pub cosines: Vec<(String, usize)>,
    pub multipliers: Vec<String>,
    pub c_l: Vec<String>,
    pub odd_vanish: bool,
    pub even_match: bool,
}

fn a3_vertices() -> Result<Vec<VecQ>> {
    let lat = build_anstar(3)?;
    voronoi_vertices(&lat)?
        .iter()
        .map(|v| lat.to_euclidean(v).ok_or_else(|| Error::Precondition("A_3* model lacks an embedding".into())))
        .collect()
}

pub fn zonal_certificate(lmax: u32) -> Result<ZonalCertificate> {
    let vertices = a3_vertices()?;
    let pole = 0;
    let spectrum = zonal_spectrum(&vertices, pole, lmax)?;
    let c_l: Vec<Rat> = (0..=lmax).map(c_l_exact).collect();
    let odd_vanish = spectrum.multipliers.iter().skip(1).step_by(2).all(Zero::is_zero);
    let even_match = spectrum.multipliers.iter().zip(&c_l).step_by(2).all(|(m, c)| m == c);
    Ok(ZonalCertificate {
        lmax,
        vertices: fmt_vecs(&vertices),
        pole,
        cosines: spectrum.cosines.iter().map(|(t, c)| (fmt_rat(t), *c)).collect(),
        multipliers: fmt_vec(&spectrum.multipliers),
        c_l: fmt_vec(&c_l),
        odd_vanish,
        even_match,
    })
}

impl ZonalCertificate {
    pub fn verify(&self) -> Result<()> {
        let vertices = parse_vecs(&self.vertices)?;
        let mut listed = vertices.clone();
        let mut fresh = a3_vertices()?;
        listed.sort();
        fresh.sort();
        check(listed == fresh, "vertices are not those of the A_3* Voronoi cell")?;
        let spectrum = zonal_spectrum(&vertices, self.pole, self.lmax)?;
        let cosines: Vec<(String, usize)> = spectrum.cosines.iter().map(|(t, c)| (fmt_rat(t), *c)).collect();
        check(cosines == self.cosines, "cosine multiset mismatch")?;
        check(fmt_vec(&spectrum.multipliers) == self.multipliers, "multipliers differ from a recomputation")?;
        let c_l = parse_vec(&self.c_l)?;
        check(c_l.len() == self.lmax as usize + 1, "one c_l per degree expected")?;
        for (l, c) in c_l.iter().enumerate() {
            check(*c == c_l_exact(l as u32), format!("c_{l} mismatch"))?;
        }
        let odd = spectrum.multipliers.iter().skip(1).step_by(2).all(Zero::is_zero);
        let even = spectrum.multipliers.iter().zip(&c_l).step_by(2).all(|(m, c)| m == c);
        check(odd == self.odd_vanish && even == self.even_match, "summary flags mismatch")?;
        check(odd && even, "multipliers do not reproduce c_l")
    }
}
