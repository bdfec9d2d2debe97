//! Squared circumradius of a linearly transformed primitive simplex, split
//! into its first-order part and a nonnegative remainder.

use crate::error::{Error, Result};
use crate::exact::{dot, int, one, solve_affine, MatQ, Rat, SymMapQ, VecQ};
use crate::lattice::PrimitiveSimplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrAfter {
    /// `cr(TS)²`.
    pub cr2: Rat,
    /// `cr2(S) + Σ_j α_j (|T x_j|² − |x_j|²)`.
    pub linear: Rat,
    /// `cr2 − linear = |u|²` for the displaced circumcenter `u`; never negative.
    pub error: Rat,
}

/// The circumsphere of `T·S` from the linear system
/// `2⟨x_j, w⟩ + κ = |T x_j|² − cr2(S)`, `j = 0..=n`, with `w = N u` and
/// `N = Tᵀ G T`. Then `cr(TS)² = cr2(S) + κ + wᵀ N⁻¹ w`, and `κ` is the
/// first-order term because the last row of the inverse system matrix is `α`.
pub fn cr_after(t: &MatQ, s: &PrimitiveSimplex, gram: &SymMapQ) -> Result<CrAfter> {
    let n = s.n();
    if t.rows() != n || t.cols() != n {
        return Err(Error::Dimension(format!("transform must be {n}x{n}")));
    }
    let g = gram.to_mat();
    let nform = SymMapQ::from_mat(&t.transpose().mul(&g)?.mul(t)?)?;
    cr_after_form(&nform.sub(gram), s, gram)
}

/// Same as [`cr_after`] for any `T` with `TᵀGT = G + m_form`; only this form
/// matters, so `T` itself need not be rational.
pub fn cr_after_form(m_form: &SymMapQ, s: &PrimitiveSimplex, gram: &SymMapQ) -> Result<CrAfter> {
    let n = s.n();
    if m_form.dim() != n {
        return Err(Error::Dimension(format!("form must be {n}x{n}")));
    }
    let nform = gram.add(m_form).to_mat();
    if !nform.is_positive_definite() {
        return Err(Error::Precondition("G + M must be positive definite".into()));
    }
    let ninv = nform.inverse()?;
    let mut a = MatQ::zeros(n + 1, n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for (j, x) in s.x.iter().enumerate() {
        for i in 0..n {
            a[(j, i)] = int(2) * &x[i];
        }
        a[(j, n)] = one();
        b.push(dot(x, &nform.mul_vec(x)) - &s.cr2);
    }
    let sol = solve_affine(&a, &b)?;
    let y = sol.unique().ok_or(Error::DegenerateSimplex)?;
    let w: VecQ = y[..n].to_vec();
    let kappa = y[n].clone();
    let error = dot(&w, &ninv.mul_vec(&w));
    let linear = &s.cr2 + &kappa;
    Ok(CrAfter {
        cr2: &linear + &error,
        linear,
        error,
    })
}

pub fn exact_cr_after(t: &MatQ, s: &PrimitiveSimplex, gram: &SymMapQ) -> Result<Rat> {
    Ok(cr_after(t, s, gram)?.cr2)
}

/// `1 + ⟨M, Q̂_S⟩` for the map `M` with quadratic form `m_form`, i.e. the
/// first-order value of `cr(TS)² / cr(S)²` when `TᵀGT = G + m_form`.
pub fn first_order_cr(m_form: &SymMapQ, s: &PrimitiveSimplex) -> Rat {
    let pairing: Rat = s
        .alpha
        .iter()
        .zip(&s.x)
        .map(|(a, x)| a * m_form.quad(x))
        .sum();
    one() + pairing / &s.cr2
}
