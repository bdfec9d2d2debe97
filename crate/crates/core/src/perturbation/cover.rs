//! Covering lattices for nearly spherical bodies: solve the linearized vertex
//! equations for `(M, t_i)`, contract until every vertex lies inside the body,
//! and report the determinant against its linear prediction.
//!
//! Everything here is in Euclidean coordinates of the lattice embedding, where
//! the critical ball has radius `R = √mu2` and the vertex equations read
//! `⟨x_ij, M x_ij + t_i⟩ = mu2 · ρ_ij`.

use num_traits::{Signed, Zero};

use super::body::RadialFunction;
use crate::error::{Error, Result};
use crate::eutaxy::{analyze, Classification};
use crate::exact::{
    abs, add_vec, dot, from_f64_ceil, from_f64_grid, min_norm_solution, one, pow,
    solve_affine, to_f64, MatQ, Rat, SymMapQ, VecQ,
};
use crate::lattice::LatticeModel;

/// Largest certified asphericity accepted by the construction.
pub const MAX_EPS: f64 = 0.1;
/// Dyadic grid for reading `ρ_ij` into exact arithmetic.
pub const RHO_BITS: u32 = 50;
/// Dyadic grid for rounding the contraction up.
pub const DELTA_BITS: u32 = 40;
/// Floating-point tolerance for radial evaluations.
pub const RADIAL_TOL: f64 = 1e-12;
/// Iteration cap for [`CoverSetup::fitted_rho`].
pub const FIT_ITERATIONS: usize = 20;

/// How the right-hand sides of the vertex equations are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fit {
    /// `ρ_ij` read off at the vertex directions; the contraction absorbs the rest.
    #[default]
    Linear,
    /// Right-hand sides corrected until every vertex sits on the boundary.
    Boundary,
}

/// Precomputed data of a critically semi-eutactic lattice with a Euclidean embedding.
#[derive(Clone, Debug)]
pub struct CoverSetup {
    pub lattice: LatticeModel,
    pub mu2: Rat,
    /// Euclidean vertices `x_ij` of each maximal simplex, relative to its circumcenter.
    pub x: Vec<Vec<VecQ>>,
    pub alpha: Vec<VecQ>,
    /// Eutaxy coefficient per simplex.
    pub upsilon: Vec<Rat>,
    /// `Q̂_i = Σ_j α_ij x_ij x_ijᵀ / mu2`.
    pub q_hat: Vec<SymMapQ>,
    pub pairs: Vec<(usize, usize)>,
    /// For simplex `i` with partner `p`, `neg[i][j]` is the index of `−x_ij` in `p`.
    pub neg: Vec<Vec<usize>>,
    /// Unit directions of `x_ij` in floating point.
    pub dirs: Vec<Vec<[f64; 3]>>,
    /// `basis_of[i][j]`: which antipodal vertex pair `(i, j)` belongs to.
    pub basis_of: Vec<Vec<usize>>,
    /// `(M, t)` in floating point for a unit `ρ` on each antipodal vertex pair.
    pub response: Vec<Response>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub m: [[f64; 3]; 3],
    pub t: Vec<[f64; 3]>,
}

impl CoverSetup {
    pub fn new(lattice: &LatticeModel) -> Result<Self> {
        let embedding = lattice
            .embedding
            .clone()
            .ok_or_else(|| Error::Precondition("lattice needs a Euclidean embedding".into()))?;
        if lattice.n != 3 {
            return Err(Error::UnsupportedDimension(lattice.n));
        }
        let analysis = analyze(lattice.clone())?;
        if analysis.report.classification != Classification::CriticallySemiEutactic {
            return Err(Error::Precondition(
                "maximal simplices must be critically semi-eutactic".into(),
            ));
        }
        let upsilon = analysis.per_simplex_coefficients().expect("semi-eutactic");
        let mu2 = analysis.mu2.clone();
        let x: Vec<Vec<VecQ>> = analysis
            .simplices
            .iter()
            .map(|s| s.x.iter().map(|v| embedding.mul_vec(v)).collect())
            .collect();
        let alpha: Vec<VecQ> = analysis.simplices.iter().map(|s| s.alpha.clone()).collect();
        let q_hat = x
            .iter()
            .zip(&alpha)
            .map(|(xs, al)| {
                xs.iter()
                    .zip(al)
                    .fold(SymMapQ::zeros(3), |acc, (v, a)| acc.add(&SymMapQ::outer(v, &(a / &mu2))))
            })
            .collect();
        let r = to_f64(&mu2).sqrt();
        let dirs = x
            .iter()
            .map(|xs| {
                xs.iter()
                    .map(|v| [to_f64(&v[0]) / r, to_f64(&v[1]) / r, to_f64(&v[2]) / r])
                    .collect()
            })
            .collect();
        let mut partner = vec![0; x.len()];
        for &(i, j) in &analysis.pairs {
            partner[i] = j;
            partner[j] = i;
        }
        let neg: Vec<Vec<usize>> = (0..x.len())
            .map(|i| {
                x[i].iter()
                    .map(|v| {
                        let minus: VecQ = v.iter().map(|c| -c).collect();
                        x[partner[i]].iter().position(|w| *w == minus).expect("paired simplex")
                    })
                    .collect()
            })
            .collect();
        let mut basis_of = vec![vec![usize::MAX; 4]; x.len()];
        let mut reps = Vec::new();
        for &(i, p) in &analysis.pairs {
            for j in 0..x[i].len() {
                let k = neg[i][j];
                basis_of[i][j] = reps.len();
                basis_of[p][k] = reps.len();
                reps.push((i, j, p, k));
            }
        }
        let mut setup = CoverSetup {
            lattice: lattice.clone(),
            mu2,
            x,
            alpha,
            upsilon,
            q_hat,
            pairs: analysis.pairs,
            neg,
            dirs,
            basis_of,
            response: Vec::new(),
        };
        let mut response = Vec::with_capacity(reps.len());
        for &(i, j, p, k) in &reps {
            let mut rho: Vec<VecQ> = setup.x.iter().map(|xs| vec![Rat::zero(); xs.len()]).collect();
            rho[i][j] = one();
            rho[p][k] = one();
            let sol = solve_treqn(&setup, &rho)?;
            let mm = sol.m.to_mat();
            response.push(Response {
                m: [0, 1, 2].map(|a| [0, 1, 2].map(|b| to_f64(&mm[(a, b)]))),
                t: sol.t.iter().map(|v| to_f64_3(v)).collect(),
            });
        }
        setup.response = response;
        Ok(setup)
    }

    /// `(M, t)` in floating point for per-pair values `c`.
    fn respond(&self, c: &[f64]) -> ([[f64; 3]; 3], Vec<[f64; 3]>) {
        let mut m = [[0.0; 3]; 3];
        let mut t = vec![[0.0; 3]; self.x.len()];
        for (ck, r) in c.iter().zip(&self.response) {
            for a in 0..3 {
                for b in 0..3 {
                    m[a][b] += ck * r.m[a][b];
                }
            }
            for (ti, rt) in t.iter_mut().zip(&r.t) {
                for a in 0..3 {
                    ti[a] += ck * rt[a];
                }
            }
        }
        (m, t)
    }

    /// Right-hand sides for the vertex equations such that the resulting
    /// vertices `y_ij` lie on the body's boundary to floating-point accuracy.
    pub fn fitted_rho(&self, body: &dyn RadialFunction) -> Vec<f64> {
        let big_r = self.radius();
        let mut rep = vec![(0, 0); self.response.len()];
        for (i, row) in self.basis_of.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                rep[k] = (i, j);
            }
        }
        let mut c: Vec<f64> = rep.iter().map(|&(i, j)| body.rho(self.dirs[i][j])).collect();
        for _ in 0..FIT_ITERATIONS {
            let (m, t) = self.respond(&c);
            let mut worst: f64 = 0.0;
            for (k, &(i, j)) in rep.iter().enumerate() {
                let x = self.dirs[i][j].map(|v| v * big_r);
                let y = [0, 1, 2].map(|a| x[a] + m[a][0] * x[0] + m[a][1] * x[1] + m[a][2] * x[2] + t[i][a]);
                let ny = norm(y);
                let radial = big_r * (1.0 + body.rho(y.map(|v| v / ny)));
                let gap = ny - radial;
                worst = worst.max(gap.abs());
                c[k] -= gap / big_r;
            }
            if worst < 1e-15 {
                break;
            }
        }
        c
    }

    pub fn radius(&self) -> f64 {
        to_f64(&self.mu2).sqrt()
    }

    /// `ρ_i = Σ_j α_ij ρ_ij`.
    pub fn rho_i(&self, rho: &[VecQ]) -> VecQ {
        rho.iter()
            .zip(&self.alpha)
            .map(|(r, a)| dot(r, a))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationSolution {
    pub m: SymMapQ,
    pub t: Vec<VecQ>,
}

/// Solve `⟨x_ij, M x_ij + t_i⟩ = mu2 · ρ_ij` with `M` of least norm, then
/// check every residual and the trace identity `trace M = Σ υ_i ρ_i`.
pub fn solve_treqn(setup: &CoverSetup, rho: &[VecQ]) -> Result<TranslationSolution> {
    if rho.len() != setup.x.len() || rho.iter().zip(&setup.x).any(|(r, x)| r.len() != x.len()) {
        return Err(Error::Dimension("ρ table does not match the simplices".into()));
    }
    for &(i, p) in &setup.pairs {
        for (j, &k) in setup.neg[i].iter().enumerate() {
            if rho[i][j] != rho[p][k] {
                return Err(Error::InconsistentRho(format!(
                    "ρ differs at opposite vertices ({i},{j}) and ({p},{k})"
                )));
            }
        }
    }
    let rho_i = setup.rho_i(rho);
    let constraints: Vec<(SymMapQ, Rat)> = setup
        .pairs
        .iter()
        .map(|&(i, _)| (setup.q_hat[i].clone(), rho_i[i].clone()))
        .collect();
    let m = min_norm_solution(&constraints)?;

    let mut t = Vec::with_capacity(setup.x.len());
    for (xs, r) in setup.x.iter().zip(rho) {
        let a = MatQ::from_rows(xs.clone())?;
        let b: VecQ = xs
            .iter()
            .zip(r)
            .map(|(x, rij)| &setup.mu2 * rij - m.quad(x))
            .collect();
        let sol = solve_affine(&a, &b)?;
        let ti = sol
            .unique()
            .cloned()
            .ok_or_else(|| Error::Verification("translation system has no unique solution".into()))?;
        t.push(ti);
    }

    let mm = m.to_mat();
    for (i, xs) in setup.x.iter().enumerate() {
        for (j, x) in xs.iter().enumerate() {
            let lhs = dot(x, &add_vec(&mm.mul_vec(x), &t[i]));
            if lhs != &setup.mu2 * &rho[i][j] {
                return Err(Error::Verification(format!("vertex equation fails at ({i},{j})")));
            }
        }
    }
    let predicted: Rat = setup.upsilon.iter().zip(&rho_i).map(|(u, r)| u * r).sum();
    if m.trace() != predicted {
        return Err(Error::Verification("trace M differs from Σ υ_i ρ_i".into()));
    }
    Ok(TranslationSolution { m, t })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexCheck {
    pub simplex: usize,
    pub vertex: usize,
    /// `‖(1−δ) y_ij‖`.
    pub scaled_norm: f64,
    /// `R · r_K(ŷ_ij)`.
    pub radial: f64,
    pub inside: bool,
}

#[derive(Clone, Debug)]
pub struct CoverConstruction {
    pub fit: Fit,
    /// `ρ_ij = r_K(x̂_ij) − 1` on the dyadic grid.
    pub rho: Vec<VecQ>,
    /// Right-hand sides actually used in the vertex equations.
    pub rho_fit: Vec<VecQ>,
    pub m: SymMapQ,
    pub t: Vec<VecQ>,
    pub delta: Rat,
    /// Largest per-vertex deficit `1 − R r_K(ŷ)/‖y‖` before rounding.
    pub max_delta_ij: f64,
    /// Contraction the tangent-line construction would prescribe.
    pub delta_tangent: f64,
    pub lattice_out: LatticeModel,
    /// `det(Id + M)`.
    pub det_linear_map: Rat,
    /// `(1−δ)^n det(Id + M)`.
    pub det_ratio: Rat,
    pub trace_m: Rat,
    pub sum_abs_rho: Rat,
    /// Measured `ε′`: `(|D − 1 − trace M| + |trace M − Σ υ_i α_ij ρ_ij| + (1 − (1−δ)^n) D) / Σ|ρ_ij|`.
    pub eps_prime: Rat,
    /// `1 + Σ υ_i α_ij ρ_ij`.
    pub linear_bound: Rat,
    /// `1 + Σ υ_i α_ij ρ_ij − ε′ Σ|ρ_ij|`.
    pub theorem_bound: Rat,
    pub verified: Vec<VertexCheck>,
    pub tolerance: f64,
}

impl CoverConstruction {
    pub fn all_inside(&self) -> bool {
        self.verified.iter().all(|v| v.inside)
    }

    pub fn meets_theorem_bound(&self) -> bool {
        self.det_ratio >= self.theorem_bound
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn to_f64_3(v: &[Rat]) -> [f64; 3] {
    [to_f64(&v[0]), to_f64(&v[1]), to_f64(&v[2])]
}

/// Build `Λ′ = (1−δ)(Id+M)Λ` covering the body `R·K`.
pub fn build_cover(body: &dyn RadialFunction, setup: &CoverSetup) -> Result<CoverConstruction> {
    build_cover_with(body, setup, Fit::Linear)
}

pub fn build_cover_with(body: &dyn RadialFunction, setup: &CoverSetup, fit: Fit) -> Result<CoverConstruction> {
    let eps = body.eps();
    if !(eps <= MAX_EPS) {
        return Err(Error::Precondition(format!(
            "body too aspherical: eps = {eps} exceeds {MAX_EPS}"
        )));
    }
    let rho: Vec<VecQ> = setup
        .dirs
        .iter()
        .map(|ds| ds.iter().map(|&d| from_f64_grid(body.rho(d), RHO_BITS)).collect())
        .collect();
    let rho_fit: Vec<VecQ> = match fit {
        Fit::Linear => rho.clone(),
        Fit::Boundary => {
            let c: Vec<Rat> = setup
                .fitted_rho(body)
                .into_iter()
                .map(|v| from_f64_grid(v, RHO_BITS))
                .collect();
            setup
                .basis_of
                .iter()
                .map(|row| row.iter().map(|&k| c[k].clone()).collect())
                .collect()
        }
    };
    let TranslationSolution { m, t } = solve_treqn(setup, &rho_fit)?;
    let big_r = setup.radius();
    let a = MatQ::identity(3).add(&m.to_mat());

    let mut ys = Vec::new();
    let mut max_delta_ij = f64::NEG_INFINITY;
    let mut delta_tangent: f64 = 0.0;
    let beta = ((1.0 - eps) / (1.0 + eps)).acos();
    for (i, xs) in setup.x.iter().enumerate() {
        for (j, x) in xs.iter().enumerate() {
            let y = to_f64_3(&add_vec(&a.mul_vec(x), &t[i]));
            let ny = norm(y);
            let dir = [y[0] / ny, y[1] / ny, y[2] / ny];
            let radial = big_r * (1.0 + body.rho(dir));
            max_delta_ij = max_delta_ij.max(1.0 - radial / ny);

            let xd = setup.dirs[i][j];
            let apex = xd.map(|c| c * big_r * (1.0 + to_f64(&rho[i][j])));
            let ab = norm([y[0] - apex[0], y[1] - apex[1], y[2] - apex[2]]);
            let gamma = ((dir[0] * xd[0] + dir[1] * xd[1] + dir[2] * xd[2]).clamp(-1.0, 1.0)).acos();
            delta_tangent = delta_tangent.max(ab * beta.sin() / (beta - gamma).cos() / ny);
            ys.push((i, j, ny, radial));
        }
    }

    let delta = if max_delta_ij <= RADIAL_TOL {
        Rat::zero()
    } else {
        from_f64_ceil(max_delta_ij, DELTA_BITS)
    };
    let shrink = one() - &delta;
    let shrink_f = to_f64(&shrink);
    let verified: Vec<VertexCheck> = ys
        .into_iter()
        .map(|(simplex, vertex, ny, radial)| {
            let scaled_norm = shrink_f * ny;
            VertexCheck {
                simplex,
                vertex,
                scaled_norm,
                radial,
                inside: scaled_norm <= radial + RADIAL_TOL,
            }
        })
        .collect();
    if let Some(v) = verified.iter().find(|v| !v.inside) {
        return Err(Error::Verification(format!(
            "vertex ({}, {}) lies outside the body after contraction",
            v.simplex, v.vertex
        )));
    }

    let det_linear_map = a.det()?;
    let n = 3u32;
    let shrink_n = pow(&shrink, n);
    let det_ratio = &shrink_n * &det_linear_map;
    let trace_m = m.trace();
    let sum_abs_rho: Rat = rho.iter().flatten().map(abs).sum();
    let weights = vertex_weights(setup);
    let linear_term: Rat = rho
        .iter()
        .flatten()
        .zip(weights.iter().flatten())
        .map(|(r, w)| r * w)
        .sum();
    let remainder = abs(&(&det_linear_map - one() - &trace_m))
        + abs(&(&trace_m - &linear_term))
        + (one() - &shrink_n) * &det_linear_map;
    let eps_prime = if sum_abs_rho.is_zero() {
        Rat::zero()
    } else {
        &remainder / &sum_abs_rho
    };
    let linear_bound = one() + &linear_term;
    let theorem_bound = &linear_bound - &eps_prime * &sum_abs_rho;

    let embedding = setup.lattice.embedding.as_ref().expect("checked in setup");
    let new_embedding = a.mul(embedding)?.scale(&shrink);
    let gram = SymMapQ::from_mat(&new_embedding.transpose().mul(&new_embedding)?)?;
    let lattice_out = LatticeModel::new(gram, Some(new_embedding), setup.lattice.delone_classes.clone())?;

    debug_assert!(!det_ratio.is_negative());
    Ok(CoverConstruction {
        fit,
        rho,
        rho_fit,
        m,
        t,
        delta,
        max_delta_ij,
        delta_tangent,
        lattice_out,
        det_linear_map,
        det_ratio,
        trace_m,
        sum_abs_rho,
        eps_prime,
        linear_bound,
        theorem_bound,
        verified,
        tolerance: RADIAL_TOL,
    })
}

/// `Σ υ_i α_ij` per vertex, the weights of `ρ_ij` in the linear bound.
pub fn vertex_weights(setup: &CoverSetup) -> Vec<VecQ> {
    setup
        .alpha
        .iter()
        .zip(&setup.upsilon)
        .map(|(a, u)| a.iter().map(|x| x * u).collect())
        .collect()
}

/// Exact `(1+c)`-scaling of a lattice, for comparison with constant `ρ`.
pub fn scaled_det_ratio(c: &Rat, n: u32) -> Rat {
    pow(&(one() + c), n)
}
