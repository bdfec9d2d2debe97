//! Eutaxy maps of primitive simplices and the semi-eutaxy classification of
//! the maximal simplices, with exact certificates for every branch.
//!
//! Lattice coordinates are not orthonormal, so a symmetric map is carried by
//! one of two symmetric matrices:
//!
//! * the eutaxy map `Q_S = Σ α_j x_j ⟨x_j, ·⟩` by its *form* `P_S = Σ α_j x_j x_jᵀ`
//!   (the map itself is `P_S · G`);
//! * a test map `M` (e.g. a Farkas direction) by its quadratic form `N`, so that
//!   `⟨x, M x⟩ = xᵀ N x`.
//!
//! With these conventions `trace(M Q_S) = Σ_ij N_ij P_ij`, the plain entrywise
//! pairing of [`SymMapQ::inner`], and the identity map has form `G⁻¹` on the `P`
//! side and `G` on the `N` side.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{int, lp_feasible_nonneg, LpOutcome, MatQ, Rat, SymMapQ};
use crate::lattice::{covering_radius, pm_pairs, LatticeModel, PrimitiveSimplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EutaxyMap {
    /// `Σ α_j x_j x_jᵀ`, divided by `cr2` when `normalized`.
    pub form: SymMapQ,
    /// Index into the simplex list the map was built from.
    pub source: usize,
    pub normalized: bool,
}

impl EutaxyMap {
    /// Matrix of the linear map in lattice coordinates, `P · G`.
    pub fn map_matrix(&self, gram: &SymMapQ) -> MatQ {
        self.form.to_mat().mul(&gram.to_mat()).expect("square")
    }

    /// `trace Q_S`, which equals 1 after normalization.
    pub fn trace(&self, gram: &SymMapQ) -> Rat {
        self.form.inner(gram)
    }
}

pub fn q_map(s: &PrimitiveSimplex, source: usize, normalize: bool) -> EutaxyMap {
    let n = s.n();
    let mut form = SymMapQ::zeros(n);
    for (a, x) in s.alpha.iter().zip(&s.x) {
        form = form.add(&SymMapQ::outer(x, a));
    }
    if normalize {
        form = form.scale(&(Rat::from_integer(1.into()) / &s.cr2));
    }
    EutaxyMap {
        form,
        source,
        normalized: normalize,
    }
}

/// Form of the identity map on the `P` side.
pub fn identity_form(gram: &SymMapQ) -> SymMapQ {
    SymMapQ::from_mat(&gram.to_mat().inverse().expect("positive definite")).expect("symmetric")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Classification {
    NotSemiEutactic,
    SemiEutactic,
    CriticallySemiEutactic,
    RedundantlySemiEutactic,
}

/// Outcome of the feasibility test with one ± pair removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairCertificate {
    /// Coefficients over all pairs, zero at the removed one.
    Feasible { coeffs: Vec<Rat> },
    /// Quadratic form `N` of a map with `⟨M, Q_i⟩ < 0` on the kept pairs and `trace M > 0`.
    Farkas { form: SymMapQ },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EutaxyReport {
    pub classification: Classification,
    /// One coefficient per ± pair with `Σ υ_i Q_i = Id`.
    pub coefficients: Option<Vec<Rat>>,
    /// Present when the full set is not semi-eutactic.
    pub farkas: Option<SymMapQ>,
    pub removals: Vec<PairCertificate>,
    /// The map `υ ↦ Σ υ_i Q_i` is injective.
    pub unique: bool,
    pub positive: bool,
}

fn is_strict_farkas(n_form: &SymMapQ, maps: &[&SymMapQ], gram: &SymMapQ) -> bool {
    maps.iter().all(|m| n_form.inner(m).is_negative()) && n_form.inner(&identity_form(gram)).is_positive()
}

fn combination(coeffs: &[Rat], maps: &[EutaxyMap]) -> SymMapQ {
    let n = maps[0].form.dim();
    coeffs
        .iter()
        .zip(maps)
        .fold(SymMapQ::zeros(n), |acc, (c, m)| acc.add(&m.form.scale(c)))
}

/// Classify a set of eutaxy maps, one per ± pair.
pub fn classify(maps: &[EutaxyMap], gram: &SymMapQ) -> EutaxyReport {
    let target = identity_form(gram);
    let forms: Vec<SymMapQ> = maps.iter().map(|m| m.form.clone()).collect();

    let full = lp_feasible_nonneg(&forms, &target);
    let coeffs = match full {
        LpOutcome::Infeasible { certificate, .. } => {
            return EutaxyReport {
                classification: Classification::NotSemiEutactic,
                coefficients: None,
                farkas: Some(certificate),
                removals: Vec::new(),
                unique: false,
                positive: false,
            };
        }
        LpOutcome::Feasible { coeffs } => coeffs,
    };

    let removals: Vec<PairCertificate> = (0..maps.len())
        .into_par_iter()
        .map(|skip| {
            let kept: Vec<SymMapQ> = forms
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, f)| f.clone())
                .collect();
            match lp_feasible_nonneg(&kept, &target) {
                LpOutcome::Feasible { coeffs } => {
                    let mut full = coeffs;
                    full.insert(skip, Rat::zero());
                    PairCertificate::Feasible { coeffs: full }
                }
                LpOutcome::Infeasible { certificate, .. } => {
                    PairCertificate::Farkas { form: certificate }
                }
            }
        })
        .collect();

    let upper: Vec<_> = forms.iter().map(|f| f.upper()).collect();
    let unique = MatQ::from_cols(&upper).expect("uniform").nullspace().is_empty();
    let positive = coeffs.iter().all(|c| c.is_positive());

    let feasible_removals = removals
        .iter()
        .filter(|r| matches!(r, PairCertificate::Feasible { .. }))
        .count();
    let classification = if feasible_removals == removals.len() {
        Classification::RedundantlySemiEutactic
    } else if feasible_removals == 0 {
        Classification::CriticallySemiEutactic
    } else {
        Classification::SemiEutactic
    };

    EutaxyReport {
        classification,
        coefficients: Some(coeffs),
        farkas: None,
        removals,
        unique,
        positive,
    }
}

impl EutaxyReport {
    /// Re-check every stored certificate exactly against `maps`.
    pub fn verify(&self, maps: &[EutaxyMap], gram: &SymMapQ) -> Result<()> {
        let fail = |msg: String| Err(Error::Verification(msg));
        let target = identity_form(gram);
        let all: Vec<&SymMapQ> = maps.iter().map(|m| &m.form).collect();
        match (&self.coefficients, &self.farkas) {
            (None, Some(f)) => {
                if self.classification != Classification::NotSemiEutactic {
                    return fail("Farkas certificate with a semi-eutactic classification".into());
                }
                if !is_strict_farkas(f, &all, gram) {
                    return fail("Farkas certificate violates a strict inequality".into());
                }
                return Ok(());
            }
            (Some(c), None) => {
                if c.iter().any(|x| x.is_negative()) || combination(c, maps) != target {
                    return fail("eutaxy coefficients do not reproduce the identity".into());
                }
            }
            _ => return fail("report must carry exactly one of coefficients or Farkas map".into()),
        }
        if self.removals.len() != maps.len() {
            return fail("one removal certificate per pair expected".into());
        }
        let mut feasible = 0;
        for (k, r) in self.removals.iter().enumerate() {
            match r {
                PairCertificate::Feasible { coeffs } => {
                    if !coeffs[k].is_zero()
                        || coeffs.iter().any(|x| x.is_negative())
                        || combination(coeffs, maps) != target
                    {
                        return fail(format!("removal certificate {k} is not a valid zero-coefficient solution"));
                    }
                    feasible += 1;
                }
                PairCertificate::Farkas { form } => {
                    let kept: Vec<&SymMapQ> = all
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != k)
                        .map(|(_, f)| *f)
                        .collect();
                    if !is_strict_farkas(form, &kept, gram) {
                        return fail(format!("removal certificate {k} violates a strict inequality"));
                    }
                }
            }
        }
        let expected = if feasible == maps.len() {
            Classification::RedundantlySemiEutactic
        } else if feasible == 0 {
            Classification::CriticallySemiEutactic
        } else {
            Classification::SemiEutactic
        };
        if expected != self.classification {
            return fail(format!("classification {:?} inconsistent with certificates", self.classification));
        }
        if self.classification == Classification::CriticallySemiEutactic && !(self.unique && self.positive) {
            return fail("critically semi-eutactic set must have unique positive coefficients".into());
        }
        Ok(())
    }
}

/// Everything needed to decide the ball's extensibility for one lattice.
#[derive(Clone, Debug)]
pub struct BallAnalysis {
    pub lattice: LatticeModel,
    pub mu2: Rat,
    pub simplices: Vec<PrimitiveSimplex>,
    pub pairs: Vec<(usize, usize)>,
    /// Normalized maps, one per pair (taken from the first member).
    pub maps: Vec<EutaxyMap>,
    pub report: EutaxyReport,
}

impl BallAnalysis {
    /// Coefficient per simplex, splitting each pair's coefficient evenly.
    pub fn per_simplex_coefficients(&self) -> Option<Vec<Rat>> {
        let c = self.report.coefficients.as_ref()?;
        let mut out = vec![Rat::zero(); self.simplices.len()];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            if i == j {
                out[i] = c[k].clone();
            } else {
                out[i] = &c[k] / int(2);
                out[j] = &c[k] / int(2);
            }
        }
        Some(out)
    }
}

pub fn analyze(lattice: LatticeModel) -> Result<BallAnalysis> {
    let (mu2, simplices) = covering_radius(&lattice)?;
    let pairs = pm_pairs(&simplices)?;
    let maps: Vec<EutaxyMap> = pairs
        .iter()
        .map(|&(i, _)| q_map(&simplices[i], i, true))
        .collect();
    let report = classify(&maps, &lattice.gram);
    Ok(BallAnalysis {
        lattice,
        mu2,
        simplices,
        pairs,
        maps,
        report,
    })
}

/// Unique eutaxy coefficients of `X(A_3*)`, one per simplex in `X` order.
pub fn eutaxy_coefficients_a3(lat: &LatticeModel) -> Result<Vec<Rat>> {
    if lat.n != 3 {
        return Err(Error::Precondition(format!("expected A_3*, got dimension {}", lat.n)));
    }
    eutaxy_coefficients(lat)
}

/// Per-simplex coefficients of a lattice whose `X` has unique eutaxy coefficients.
pub fn eutaxy_coefficients(lat: &LatticeModel) -> Result<Vec<Rat>> {
    let a = analyze(lat.clone())?;
    if !a.report.unique {
        return Err(Error::Precondition("eutaxy coefficients are not unique".into()));
    }
    a.per_simplex_coefficients()
        .ok_or_else(|| Error::Precondition("maximal simplices are not semi-eutactic".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::lattice::build_anstar;

    #[test]
    fn a2_map_is_half_identity() {
        // Brute force: Q = Σ (1/3) x_j ⟨x_j,·⟩ over the three vertices, divided by cr2.
        let lat = build_anstar(2).unwrap();
        let (_, x) = covering_radius(&lat).unwrap();
        for (i, s) in x.iter().enumerate() {
            let q = q_map(s, i, true);
            assert_eq!(q.map_matrix(&lat.gram), MatQ::identity(2).scale(&rat(1, 2)));
        }
    }

    #[test]
    fn normalized_trace_is_one_and_sign_invariant() {
        for n in 2..=4 {
            let lat = build_anstar(n).unwrap();
            let (_, x) = covering_radius(&lat).unwrap();
            let pairs = pm_pairs(&x).unwrap();
            for (i, j) in pairs {
                let qi = q_map(&x[i], i, true);
                let qj = q_map(&x[j], j, true);
                assert_eq!(qi.trace(&lat.gram), int(1));
                assert_eq!(qi.form, qj.form);
            }
        }
    }

    #[test]
    fn single_identity_pair() {
        // X = {Id/n paired with itself}: υ = n. Removing the only pair leaves the
        // empty set, so every removal is infeasible: critically semi-eutactic.
        let n = 3;
        let gram = SymMapQ::identity(n);
        let map = EutaxyMap {
            form: SymMapQ::identity(n).scale(&rat(1, n as i64)),
            source: 0,
            normalized: true,
        };
        let r = classify(std::slice::from_ref(&map), &gram);
        assert_eq!(r.coefficients, Some(vec![int(n as i64)]));
        assert_eq!(r.classification, Classification::CriticallySemiEutactic);
        assert!(r.classification != Classification::RedundantlySemiEutactic);
        r.verify(&[map], &gram).unwrap();
    }

    #[test]
    fn not_semi_eutactic_branch() {
        let gram = SymMapQ::identity(2);
        let map = EutaxyMap {
            form: SymMapQ::outer(&[int(1), int(0)], &int(1)),
            source: 0,
            normalized: true,
        };
        let r = classify(std::slice::from_ref(&map), &gram);
        assert_eq!(r.classification, Classification::NotSemiEutactic);
        r.verify(&[map], &gram).unwrap();
    }

    #[test]
    fn scaled_gram_gives_same_coefficients() {
        let lat = build_anstar(3).unwrap();
        let scaled = LatticeModel::new(lat.gram.scale(&int(4)), None, lat.delone_classes.clone()).unwrap();
        assert_eq!(eutaxy_coefficients_a3(&lat).unwrap(), eutaxy_coefficients_a3(&scaled).unwrap());
    }

    #[test]
    fn tampered_report_fails_verification() {
        let a = analyze(build_anstar(3).unwrap()).unwrap();
        let mut bad = a.report.clone();
        if let Some(c) = bad.coefficients.as_mut() {
            c[0] += int(1);
        }
        assert!(bad.verify(&a.maps, &a.lattice.gram).is_err());
        let mut relabeled = a.report.clone();
        relabeled.classification = Classification::RedundantlySemiEutactic;
        assert!(relabeled.verify(&a.maps, &a.lattice.gram).is_err());
    }
}
