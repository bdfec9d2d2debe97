//! Inextensibility witnesses: a transform `T = Id + (s/2) G⁻¹N` of larger
//! determinant that keeps every other maximal simplex inside the ball and
//! fits the removed one inside the augmented ball `conv(B, ±(1+ε)p)`.
//!
//! All quantities are in lattice coordinates; the ball has squared radius `mu2`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::eutaxy::{analyze, identity_form, BallAnalysis, PairCertificate};
use crate::exact::{add_vec, dot, int, one, rat, scale_vec, sub_vec, MatQ, Rat, SymMapQ, VecQ};
use crate::lattice::{circumsphere, LatticeModel};

use super::circumradius::exact_cr_after;

/// Smallest step tried by the halving search, as a power of two.
pub const STEP_CUTOFF_BITS: u32 = 30;
/// Translations along the pole are tried at `τ = ε·j/TAU_STEPS`.
pub const TAU_STEPS: i64 = 64;

/// `conv(B(√radius2), ±(1+eps)·pole)`, with `|pole|² = radius2` in the metric `gram`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedBall {
    pub eps: Rat,
    pub pole: VecQ,
    pub radius2: Rat,
    pub gram: SymMapQ,
}

impl AugmentedBall {
    pub fn new(eps: Rat, pole: VecQ, gram: SymMapQ) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::Precondition("eps must be positive".into()));
        }
        let radius2 = gram.quad(&pole);
        if radius2.is_zero() {
            return Err(Error::Precondition("pole must be nonzero".into()));
        }
        Ok(AugmentedBall {
            eps,
            pole,
            radius2,
            gram,
        })
    }

    fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        dot(a, &self.gram.to_mat().mul_vec(b))
    }
}

/// Exact membership in the augmented ball.
///
/// `q` lies in `conv(B, z)` iff `|q|² <= R²` or some `λ ∈ [0, 1]` has
/// `f(λ) = |q − λz|² − (1−λ)²R² <= 0`. `f` is a convex quadratic, so it
/// suffices to test its minimizer clamped to `[0, 1]`.
pub fn member_augmented_ball(q: &[Rat], ball: &AugmentedBall) -> bool {
    let r2 = &ball.radius2;
    let qq = ball.gram.quad(q);
    if qq <= *r2 {
        return true;
    }
    let scale = one() + &ball.eps;
    [scale.clone(), -scale].iter().any(|s| {
        let z = scale_vec(s, &ball.pole);
        let zz = ball.gram.quad(&z);
        let qz = ball.inner(q, &z);
        let a = &zz - r2;
        let b = &qz - r2;
        let lambda = (&b / &a).clamp(Rat::zero(), Rat::one());
        let f = &a * &lambda * &lambda - int(2) * &b * &lambda + (&qq - r2);
        !f.is_positive()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionWitness {
    /// Index of the removed ± pair.
    pub removed: usize,
    /// Simplex `S₀` (index into the maximal simplices) and its partner.
    pub simplex: (usize, usize),
    /// Quadratic form `N` of the Farkas direction for the kept pairs.
    pub farkas: SymMapQ,
    pub s: Rat,
    /// `Id + (s/2) G⁻¹ N`.
    pub t: MatQ,
    pub det_t: Rat,
    /// `cr(TS)²` for every kept simplex, with its index.
    pub kept_cr2: Vec<(usize, Rat)>,
    pub mu2: Rat,
    pub ball: AugmentedBall,
    /// Index of the vertex of `S₀` used as the pole.
    pub pole_vertex: usize,
    /// Translation `τ · pole` applied after centering `T S₀` at the origin.
    pub tau: Rat,
    /// Translated vertices of `T S₀`.
    pub placed: Vec<VecQ>,
    pub members: Vec<bool>,
}

impl ExtensionWitness {
    /// Recompute every check from `(removed, farkas, s, tau, eps)` alone.
    pub fn verify(&self, lat: &LatticeModel) -> Result<()> {
        let analysis = analyze(lat.clone())?;
        let fresh = witness_at(&analysis, self.removed, &self.farkas, &self.s, &self.ball.eps, Some(&self.tau))?;
        if fresh != *self {
            return Err(Error::Verification("witness does not match its recomputation".into()));
        }
        Ok(())
    }
}

fn farkas_for(analysis: &BallAnalysis, removed: usize) -> Result<SymMapQ> {
    if removed >= analysis.pairs.len() {
        return Err(Error::Precondition(format!(
            "pair {removed} out of range (lattice has {} pairs)",
            analysis.pairs.len()
        )));
    }
    if analysis.report.coefficients.is_none() {
        return Err(Error::Precondition("maximal simplices are not semi-eutactic".into()));
    }
    match &analysis.report.removals[removed] {
        PairCertificate::Feasible { .. } => Err(Error::Extensible),
        PairCertificate::Farkas { form } => Ok(form.clone()),
    }
}

/// Vertex of `S₀` having negative inner product with every other vertex, if any.
fn choose_pole(x: &[VecQ], gram: &SymMapQ) -> usize {
    let g = gram.to_mat();
    (0..x.len())
        .find(|&p| {
            let gp = g.mul_vec(&x[p]);
            (0..x.len()).all(|j| j == p || dot(&x[j], &gp).is_negative())
        })
        .unwrap_or(0)
}

/// Check one step `s`; with `tau = None` the translation is searched.
pub fn witness_at(
    analysis: &BallAnalysis,
    removed: usize,
    farkas: &SymMapQ,
    s: &Rat,
    eps: &Rat,
    tau: Option<&Rat>,
) -> Result<ExtensionWitness> {
    let lat = &analysis.lattice;
    let gram = &lat.gram;
    let n = lat.n;
    let (i0, j0) = analysis.pairs.get(removed).copied().ok_or_else(|| {
        Error::Precondition(format!("pair {removed} out of range"))
    })?;

    let kept_maps: Vec<&SymMapQ> = analysis
        .maps
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != removed)
        .map(|(_, m)| &m.form)
        .collect();
    if !kept_maps.iter().all(|m| farkas.inner(m).is_negative())
        || !farkas.inner(&identity_form(gram)).is_positive()
    {
        return Err(Error::Verification("Farkas direction is not strict on the kept pairs".into()));
    }

    let ginv = gram.to_mat().inverse()?;
    let t = MatQ::identity(n).add(&ginv.mul(&farkas.to_mat())?.scale(&(s / int(2))));
    let det_t = t.det()?;
    if det_t <= Rat::one() {
        return Err(Error::Verification(format!("det T = {det_t} does not exceed 1")));
    }
    let mut kept_cr2 = Vec::new();
    for (k, simplex) in analysis.simplices.iter().enumerate() {
        if k == i0 || k == j0 {
            continue;
        }
        let cr2 = exact_cr_after(&t, simplex, gram)?;
        if cr2 >= analysis.mu2 {
            return Err(Error::Verification(format!(
                "kept simplex {k} has cr² = {cr2} >= {}",
                analysis.mu2
            )));
        }
        kept_cr2.push((k, cr2));
    }

    let s0 = &analysis.simplices[i0];
    let pole_vertex = choose_pole(&s0.x, gram);
    let ball = AugmentedBall::new(eps.clone(), s0.x[pole_vertex].clone(), gram.clone())?;
    let image: Vec<VecQ> = s0.x.iter().map(|v| t.mul_vec(v)).collect();
    let center = circumsphere(&image, gram)?.center;
    let centered: Vec<VecQ> = image.iter().map(|v| sub_vec(v, &center)).collect();

    let place = |tau: &Rat| -> (Vec<VecQ>, Vec<bool>) {
        let shift = scale_vec(tau, &ball.pole);
        let placed: Vec<VecQ> = centered.iter().map(|v| add_vec(v, &shift)).collect();
        let members = placed.iter().map(|q| member_augmented_ball(q, &ball)).collect();
        (placed, members)
    };
    let candidates: Vec<Rat> = match tau {
        Some(t) => vec![t.clone()],
        None => (0..=TAU_STEPS).map(|j| eps * rat(j, TAU_STEPS)).collect(),
    };
    for tau in candidates {
        let (placed, members) = place(&tau);
        if members.iter().all(|&m| m) {
            return Ok(ExtensionWitness {
                removed,
                simplex: (i0, j0),
                farkas: farkas.clone(),
                s: s.clone(),
                t,
                det_t,
                kept_cr2,
                mu2: analysis.mu2.clone(),
                ball,
                pole_vertex,
                tau,
                placed,
                members,
            });
        }
    }
    Err(Error::Verification("no translate of T·S₀ fits the augmented ball".into()))
}

/// Halving search `s = 1, 1/2, …` for a witness that removing pair `removed`
/// from a critically semi-eutactic `X` leaves the ball improvable.
pub fn extension_witness(lat: &LatticeModel, removed: usize, eps: &Rat) -> Result<ExtensionWitness> {
    let analysis = analyze(lat.clone())?;
    extension_witness_from(&analysis, removed, eps)
}

pub fn extension_witness_from(
    analysis: &BallAnalysis,
    removed: usize,
    eps: &Rat,
) -> Result<ExtensionWitness> {
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let farkas = farkas_for(analysis, removed)?;
    let mut s = Rat::one();
    let cutoff = Rat::new(1.into(), num_bigint::BigInt::one() << STEP_CUTOFF_BITS as usize);
    while s >= cutoff {
        if let Ok(w) = witness_at(analysis, removed, &farkas, &s, eps, None) {
            return Ok(w);
        }
        s /= int(2);
    }
    Err(Error::NoWitness(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_anstar;

    fn unit_ball(eps: Rat) -> AugmentedBall {
        AugmentedBall::new(eps, vec![int(0), int(0), int(1)], SymMapQ::identity(3)).unwrap()
    }

    #[test]
    fn apex_and_beyond() {
        let eps = rat(1, 100);
        let b = unit_ball(eps.clone());
        let apex = vec![int(0), int(0), one() + &eps];
        assert!(member_augmented_ball(&apex, &b));
        let low = vec![int(0), int(0), -(one() + &eps)];
        assert!(member_augmented_ball(&low, &b));
        let beyond = vec![int(0), int(0), one() + int(2) * &eps];
        assert!(!member_augmented_ball(&beyond, &b));
    }

    #[test]
    fn equator_unchanged() {
        let b = unit_ball(rat(1, 100));
        assert!(member_augmented_ball(&[int(1), int(0), int(0)], &b));
        assert!(member_augmented_ball(&[rat(3, 5), rat(4, 5), int(0)], &b));
        assert!(!member_augmented_ball(&[rat(3, 5), rat(81, 100), int(0)], &b));
    }

    #[test]
    fn cone_region_between_ball_and_apex() {
        // Just above the sphere near the pole, inside the tangent cone.
        let b = unit_ball(rat(1, 10));
        assert!(member_augmented_ball(&[rat(1, 100), int(0), rat(104, 100)], &b));
        assert!(!member_augmented_ball(&[rat(30, 100), int(0), rat(100, 100)], &b));
    }

    #[test]
    fn a3_witness_for_every_pair() {
        let lat = build_anstar(3).unwrap();
        let analysis = analyze(lat.clone()).unwrap();
        for k in 0..analysis.pairs.len() {
            let w = extension_witness_from(&analysis, k, &rat(1, 100)).unwrap();
            assert!(w.det_t > one());
            assert!(w.kept_cr2.iter().all(|(_, c)| *c < w.mu2));
            assert_eq!(w.kept_cr2.len(), 4);
            assert!(w.members.iter().all(|&m| m));
        }
    }

    #[test]
    fn zero_step_rejected() {
        let lat = build_anstar(3).unwrap();
        let analysis = analyze(lat).unwrap();
        let farkas = farkas_for(&analysis, 0).unwrap();
        let r = witness_at(&analysis, 0, &farkas, &Rat::zero(), &rat(1, 100), None);
        assert!(matches!(r, Err(Error::Verification(_))));
    }

    #[test]
    fn a4_is_extensible() {
        let lat = build_anstar(4).unwrap();
        assert!(matches!(extension_witness(&lat, 0, &rat(1, 100)), Err(Error::Extensible)));
    }
}
