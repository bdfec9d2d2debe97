//! A_n* in lattice coordinates, its Delone simplex classes, circumcenters, and
//! brute-force enumeration oracles for the empty-sphere and genericity
//! properties.
//!
//! Every model is stored with an integral Gram matrix; for A_n* we use
//! `(n+1)·I − J`, i.e. the generators `f_i` scaled by `n+1` in squared length,
//! so that the `n = 3` model coincides with the body-centered cubic lattice
//! `2Z³ ∪ (2Z³ + (1,1,1))`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, int, solve_affine, sub_vec, MatQ, Rat, SymMapQ, VecQ};

/// Delone simplex with integer lattice-coordinate vertices; the first vertex is the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeloneSimplex {
    pub vertices: Vec<Vec<i64>>,
    /// Generating permutation of `1..=n+1` (empty for hand-built simplices).
    pub label: Vec<usize>,
}

impl DeloneSimplex {
    pub fn new(vertices: Vec<Vec<i64>>) -> Self {
        DeloneSimplex {
            vertices,
            label: Vec::new(),
        }
    }

    pub fn rational_vertices(&self) -> Vec<VecQ> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|&x| int(x)).collect())
            .collect()
    }

    pub fn translated(&self, by: &[i64]) -> Self {
        DeloneSimplex {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(by).map(|(a, b)| a + b).collect())
                .collect(),
            label: self.label.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModel {
    pub n: usize,
    pub gram: SymMapQ,
    /// Columns are the Euclidean images of the lattice basis vectors.
    pub embedding: Option<MatQ>,
    pub delone_classes: Vec<DeloneSimplex>,
}

impl LatticeModel {
    pub fn new(
        gram: SymMapQ,
        embedding: Option<MatQ>,
        delone_classes: Vec<DeloneSimplex>,
    ) -> Result<Self> {
        let n = gram.dim();
        if !gram.to_mat().is_positive_definite() {
            return Err(Error::Precondition("Gram matrix is not positive definite".into()));
        }
        if let Some(e) = &embedding {
            if e.cols() != n || e.transpose().mul(e)? != gram.to_mat() {
                return Err(Error::Precondition("embedding does not reproduce the Gram matrix".into()));
            }
        }
        for s in &delone_classes {
            if s.vertices.len() != n + 1 || s.vertices.iter().any(|v| v.len() != n) {
                return Err(Error::Dimension("Delone simplex must have n+1 vertices in Z^n".into()));
            }
            if s.vertices[0].iter().any(|&x| x != 0) {
                return Err(Error::Precondition("first Delone vertex must be the origin".into()));
            }
        }
        Ok(LatticeModel {
            n,
            gram,
            embedding,
            delone_classes,
        })
    }

    pub fn norm2(&self, v: &[Rat]) -> Rat {
        self.gram.quad(v)
    }

    pub fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let g = self.gram.to_mat();
        dot(a, &g.mul_vec(b))
    }

    /// Covolume squared, `det(gram)`.
    pub fn det_gram(&self) -> Rat {
        self.gram.to_mat().det().expect("square")
    }

    /// Same lattice in the basis `B·U` for a unimodular integer matrix `U`.
    pub fn change_basis(&self, u: &[Vec<i64>]) -> Result<Self> {
        let um = MatQ::from_rows(u.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())?;
        if um.rows() != self.n || !um.is_square() || um.det()?.abs() != Rat::one() {
            return Err(Error::Precondition("change of basis must be unimodular".into()));
        }
        let uinv = um.inverse()?;
        let gram = SymMapQ::from_mat(&um.transpose().mul(&self.gram.to_mat())?.mul(&um)?)?;
        let embedding = match &self.embedding {
            Some(e) => Some(e.mul(&um)?),
            None => None,
        };
        let classes = self
            .delone_classes
            .iter()
            .map(|s| DeloneSimplex {
                vertices: s
                    .rational_vertices()
                    .iter()
                    .map(|v| uinv.mul_vec(v).iter().map(|x| x.to_integer().try_into().expect("small")).collect())
                    .collect(),
                label: s.label.clone(),
            })
            .collect();
        LatticeModel::new(gram, embedding, classes)
    }

    pub fn to_euclidean(&self, v: &[Rat]) -> Option<VecQ> {
        self.embedding.as_ref().map(|e| e.mul_vec(v))
    }
}

/// Permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

pub fn anstar_gram(n: usize) -> SymMapQ {
    let mut g = MatQ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = if i == j { int(n as i64) } else { int(-1) };
        }
    }
    SymMapQ::from_mat(&g).expect("symmetric")
}

/// A_n* with its `n!` Delone classes.
///
/// Classes are the partial-sum simplices `0, f_σ1, f_σ1 + f_σ2, …` over
/// permutations σ of `1..=n+1`, taken modulo cyclic shifts; the representative
/// is the shift that puts `n+1` last, which makes every vertex a 0/1 vector.
pub fn build_anstar(n: usize) -> Result<LatticeModel> {
    if !(2..=5).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let classes = permutations(n)
        .into_iter()
        .map(|perm| {
            let mut vertices = Vec::with_capacity(n + 1);
            let mut cur = vec![0i64; n];
            vertices.push(cur.clone());
            for &i in &perm[..n - 1] {
                cur[i] = 1;
                vertices.push(cur.clone());
            }
            cur[perm[n - 1]] = 1;
            vertices.push(cur);
            let mut label: Vec<usize> = perm.iter().map(|i| i + 1).collect();
            label.push(n + 1);
            DeloneSimplex { vertices, label }
        })
        .collect();
    let embedding = (n == 3).then(|| {
        MatQ::from_cols(&[
            crate::exact::int_vec(&[1, 1, 1]),
            crate::exact::int_vec(&[1, -1, -1]),
            crate::exact::int_vec(&[-1, 1, -1]),
        ])
        .expect("3x3")
    });
    LatticeModel::new(anstar_gram(n), embedding, classes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circumsphere {
    pub center: VecQ,
    /// Barycentric coordinates of the center: `Σ α_j v_j = center`, `Σ α_j = 1`.
    pub alpha: VecQ,
    pub cr2: Rat,
}

/// Exact circumsphere of `n+1` rational points under the inner product `gram`.
pub fn circumsphere(vertices: &[VecQ], gram: &SymMapQ) -> Result<Circumsphere> {
    let n = gram.dim();
    if vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "need {} vertices of dimension {n}",
            n + 1
        )));
    }
    let g = gram.to_mat();
    let v0 = &vertices[0];
    let n0 = gram.quad(v0);
    // 2 (v_k − v_0)ᵀ G c = |v_k|² − |v_0|²
    let mut a = MatQ::zeros(n, n);
    let mut b = Vec::with_capacity(n);
    for k in 1..=n {
        let d = sub_vec(&vertices[k], v0);
        let row = g.mul_vec(&d);
        for j in 0..n {
            a[(k - 1, j)] = int(2) * &row[j];
        }
        b.push(gram.quad(&vertices[k]) - &n0);
    }
    let sol = solve_affine(&a, &b)?;
    let center = sol.unique().cloned().ok_or(Error::DegenerateSimplex)?;
    let cr2 = gram.quad(&sub_vec(v0, &center));

    let mut m = MatQ::zeros(n + 1, n + 1);
    for (j, v) in vertices.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = v[i].clone();
        }
        m[(n, j)] = Rat::one();
    }
    let mut rhs = center.clone();
    rhs.push(Rat::one());
    let alpha = solve_affine(&m, &rhs)?
        .unique()
        .cloned()
        .ok_or(Error::DegenerateSimplex)?;
    Ok(Circumsphere { center, alpha, cr2 })
}

pub fn circumcenter(s: &DeloneSimplex, gram: &SymMapQ) -> Result<Circumsphere> {
    circumsphere(&s.rational_vertices(), gram)
}

/// Simplex of Voronoi vertices inscribed in a sphere about the origin:
/// `x_j = c − v_j` for the Delone simplex `{v_j}` with circumcenter `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSimplex {
    pub x: Vec<VecQ>,
    pub alpha: VecQ,
    pub cr2: Rat,
    /// Index of the Delone class this simplex comes from.
    pub source: usize,
}

impl PrimitiveSimplex {
    pub fn from_delone(s: &DeloneSimplex, gram: &SymMapQ, source: usize) -> Result<Self> {
        let cs = circumcenter(s, gram)?;
        let x = s
            .rational_vertices()
            .iter()
            .map(|v| sub_vec(&cs.center, v))
            .collect();
        Ok(PrimitiveSimplex {
            x,
            alpha: cs.alpha,
            cr2: cs.cr2,
            source,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len() - 1
    }

    /// `Σ α_j = 1`, `Σ α_j x_j = 0`, and every `|x_j|²` equals `cr2`.
    pub fn check(&self, gram: &SymMapQ) -> bool {
        let n = self.n();
        let sum: Rat = self.alpha.iter().sum();
        let mut bary = vec![Rat::zero(); n];
        for (a, x) in self.alpha.iter().zip(&self.x) {
            for i in 0..n {
                bary[i] += a * &x[i];
            }
        }
        sum.is_one()
            && bary.iter().all(Zero::is_zero)
            && self.x.iter().all(|x| gram.quad(x) == self.cr2)
    }

    fn vertex_set(&self) -> Vec<VecQ> {
        let mut v = self.x.clone();
        v.sort();
        v
    }

    pub fn is_negative_of(&self, other: &PrimitiveSimplex) -> bool {
        let neg: Vec<VecQ> = other.x.iter().map(|x| crate::exact::neg_vec(x)).collect();
        let mut neg_sorted = neg;
        neg_sorted.sort();
        self.vertex_set() == neg_sorted
    }
}

pub fn primitive_simplices(lat: &LatticeModel) -> Result<Vec<PrimitiveSimplex>> {
    lat.delone_classes
        .iter()
        .enumerate()
        .map(|(i, s)| PrimitiveSimplex::from_delone(s, &lat.gram, i))
        .collect()
}

/// Squared covering radius and the maximal primitive simplices `X(Λ)`.
///
/// Every primitive simplex arises from exactly one Delone class and the set is
/// closed under negation, so `X` already contains both members of each ± pair.
pub fn covering_radius(lat: &LatticeModel) -> Result<(Rat, Vec<PrimitiveSimplex>)> {
    let all = primitive_simplices(lat)?;
    let mu2 = all
        .iter()
        .map(|s| s.cr2.clone())
        .max()
        .ok_or_else(|| Error::Precondition("no Delone classes".into()))?;
    let x = all.into_iter().filter(|s| s.cr2 == mu2).collect();
    Ok((mu2, x))
}

/// Indices `(i, j)` with `X[j] = −X[i]`, `i <= j`, in order of first appearance.
pub fn pm_pairs(x: &[PrimitiveSimplex]) -> Result<Vec<(usize, usize)>> {
    let mut seen = vec![false; x.len()];
    let mut pairs = Vec::new();
    for i in 0..x.len() {
        if seen[i] {
            continue;
        }
        let j = (0..x.len())
            .find(|&j| !seen[j] && x[j].is_negative_of(&x[i]))
            .ok_or_else(|| Error::Precondition(format!("simplex {i} has no negative in X")))?;
        seen[i] = true;
        seen[j] = true;
        pairs.push((i, j));
    }
    Ok(pairs)
}

/// All integer vectors `l` with `lᵀ G l <= bound`.
pub fn enumerate_points(gram: &SymMapQ, bound: &Rat) -> Vec<Vec<i64>> {
    let n = gram.dim();
    let ginv = gram.to_mat().inverse().expect("positive definite");
    let b = bound.to_f64().unwrap_or(0.0).max(0.0);
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let gii = ginv[(i, i)].to_f64().unwrap_or(0.0);
            (b * gii).sqrt().floor() as i64 + 1
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let q: Vec<Rat> = cur.iter().map(|&x| int(x)).collect();
        if gram.quad(&q) <= *bound {
            out.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if cur[k] < radius[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = -radius[k];
            k += 1;
        }
    }
}

fn oracle_bound(lat: &LatticeModel, cr2: &Rat) -> Result<Rat> {
    let (mu2, _) = covering_radius(lat)?;
    Ok(int(4) * mu2.max(cr2.clone()))
}

/// Lattice points at exact distance `cr` and strictly inside the circumsphere.
fn sphere_census(lat: &LatticeModel, s: &DeloneSimplex) -> Result<(usize, usize)> {
    let cs = circumcenter(s, &lat.gram)?;
    let bound = oracle_bound(lat, &cs.cr2)?;
    let mut on = 0;
    let mut inside = 0;
    for p in enumerate_points(&lat.gram, &bound) {
        let q: Vec<Rat> = p.iter().map(|&x| int(x)).collect();
        let d = lat.norm2(&sub_vec(&q, &cs.center));
        match d.cmp(&cs.cr2) {
            std::cmp::Ordering::Less => inside += 1,
            std::cmp::Ordering::Equal => on += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    Ok((on, inside))
}

/// No lattice point lies strictly inside the circumsphere of `s`.
///
/// Since the origin is a vertex, every such point has norm below `2·cr`, so
/// enumerating `|l|² <= 4·max(mu2, cr2)` is exhaustive.
pub fn verify_empty_sphere(lat: &LatticeModel, s: &DeloneSimplex) -> Result<bool> {
    let (on, inside) = sphere_census(lat, s)?;
    Ok(inside == 0 && on >= lat.n + 1)
}

/// Each circumcenter has exactly `n+1` nearest lattice points.
pub fn genericity_check(lat: &LatticeModel) -> Result<bool> {
    for s in &lat.delone_classes {
        let (on, inside) = sphere_census(lat, s)?;
        if inside != 0 || on != lat.n + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vertices of the Voronoi cell `P_0`: the union of all primitive simplices.
pub fn voronoi_vertices(lat: &LatticeModel) -> Result<Vec<VecQ>> {
    let mut out: Vec<VecQ> = Vec::new();
    for s in primitive_simplices(lat)? {
        for x in s.x {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Covering density of balls of squared radius `mu2` centered at the lattice
/// points: `vol B^n · mu2^{n/2} / sqrt(det gram)`.
pub fn ball_covering_density(lat: &LatticeModel) -> Result<f64> {
    let (mu2, _) = covering_radius(lat)?;
    let n = lat.n as f64;
    let unit = std::f64::consts::PI.powf(n / 2.0) / gamma_half_int(lat.n + 2);
    let mu2 = mu2.to_f64().unwrap_or(f64::NAN);
    let det = lat.det_gram().to_f64().unwrap_or(f64::NAN);
    Ok(unit * mu2.powf(n / 2.0) / det.sqrt())
}

/// `Γ(k/2)` for a positive integer `k`.
fn gamma_half_int(k: usize) -> f64 {
    if k == 1 {
        return std::f64::consts::PI.sqrt();
    }
    if k == 2 {
        return 1.0;
    }
    (k as f64 / 2.0 - 1.0) * gamma_half_int(k - 2)
}
