//! The zonal measure carried by the 24 Voronoi vertices of `A_3*` and the
//! multiplier transform it induces on spherical-harmonic expansions.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::legendre::{legendre_rational_table, rescaled_q_mod16_table, NODE_WEIGHTS};
use crate::error::{Error, Result};
use crate::exact::{dot, int, rat, Rat, VecQ};

/// Degrees beyond the exact range are flagged by residues up to this bound.
pub const MOD16_HORIZON: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierSpectrum {
    /// Distinct normalized inner products `⟨p, x⟩ / ⟨p, p⟩` with multiplicities, descending.
    pub cosines: Vec<(Rat, usize)>,
    /// `m_l = ½ Σ_i P_l(t_i)` for `l = 0..=lmax`.
    pub multipliers: Vec<Rat>,
    /// For `lmax < l <= MOD16_HORIZON`: `5^l l! c_l ≢ 0 (mod 16)`.
    pub mod16_nonzero: Vec<bool>,
}

impl MultiplierSpectrum {
    pub fn lmax(&self) -> u32 {
        self.multipliers.len() as u32 - 1
    }

    pub fn get(&self, l: u32) -> Option<&Rat> {
        self.multipliers.get(l as usize)
    }

    /// Whether the degree-`l` multiplier is certified nonzero, exactly or by residue.
    pub fn certified_nonzero(&self, l: u32) -> Option<bool> {
        if let Some(m) = self.get(l) {
            return Some(!m.is_zero());
        }
        let k = (l - self.lmax() - 1) as usize;
        match self.mod16_nonzero.get(k) {
            Some(true) if l % 2 == 0 && l >= 6 => Some(true),
            _ => None,
        }
    }
}

/// Cosine pattern of the 24-vertex measure: `t_k = k/5` with the node weights.
pub fn expected_cosines() -> Vec<(Rat, usize)> {
    let mut out = Vec::new();
    for k in (0..=5).rev() {
        let w = NODE_WEIGHTS[k as usize] as usize;
        out.push((rat(k, 5), if k == 0 { 2 * w } else { w }));
    }
    for k in 1..=5 {
        out.push((rat(-k, 5), NODE_WEIGHTS[k as usize] as usize));
    }
    out
}

/// Multipliers of `½ Σ_i δ_{x_i}` viewed as a zonal measure about `vertices[pole]`.
pub fn zonal_spectrum(vertices: &[VecQ], pole: usize, lmax: u32) -> Result<MultiplierSpectrum> {
    let p = vertices
        .get(pole)
        .ok_or_else(|| Error::Precondition(format!("pole index {pole} out of range")))?;
    let pp = dot(p, p);
    if pp.is_zero() {
        return Err(Error::Precondition("pole is the origin".into()));
    }
    let mut counts: BTreeMap<Rat, usize> = BTreeMap::new();
    for x in vertices {
        if x.len() != p.len() {
            return Err(Error::Dimension("vertex dimension mismatch".into()));
        }
        if dot(x, x) != pp {
            return Err(Error::Verification("vertices do not lie on one sphere".into()));
        }
        *counts.entry(dot(p, x) / &pp).or_default() += 1;
    }
    let cosines: Vec<(Rat, usize)> = counts.into_iter().rev().collect();
    if cosines != expected_cosines() {
        return Err(Error::Verification(format!(
            "cosine multiset mismatch: {:?}",
            cosines
                .iter()
                .map(|(t, c)| format!("{t}x{c}"))
                .collect::<Vec<_>>()
        )));
    }

    let mut multipliers = vec![Rat::zero(); lmax as usize + 1];
    for (t, c) in &cosines {
        let table = legendre_rational_table(lmax, t);
        for (m, v) in multipliers.iter_mut().zip(table) {
            *m += v * int(*c as i64);
        }
    }
    let half = rat(1, 2);
    for m in multipliers.iter_mut() {
        *m *= &half;
    }

    let mod16_nonzero = if lmax < MOD16_HORIZON {
        let tables: Vec<Vec<u8>> = (0..6).map(|k| rescaled_q_mod16_table(MOD16_HORIZON, k)).collect();
        (lmax + 1..=MOD16_HORIZON)
            .map(|l| {
                let r: u32 = (0..6)
                    .map(|k| NODE_WEIGHTS[k] as u32 * tables[k][l as usize] as u32)
                    .sum();
                r % 16 != 0
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(MultiplierSpectrum {
        cosines,
        multipliers,
        mod16_nonzero,
    })
}

/// Finite real spherical-harmonic expansion with exact coefficients, keyed by `(l, m)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expansion {
    pub coeffs: BTreeMap<(u32, i32), Rat>,
}

impl Expansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, l: u32, m: i32, c: Rat) -> Self {
        self.insert(l, m, c);
        self
    }

    pub fn insert(&mut self, l: u32, m: i32, c: Rat) {
        assert!(m.unsigned_abs() <= l, "order {m} exceeds degree {l}");
        if c.is_zero() {
            self.coeffs.remove(&(l, m));
        } else {
            self.coeffs.insert((l, m), c);
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(l, _)| l).max()
    }

    /// Even, with no degree-2 component: the truncated space `Z`.
    pub fn in_z(&self) -> bool {
        self.coeffs.keys().all(|&(l, _)| l % 2 == 0 && l != 2)
    }

    fn map_degrees(&self, mut f: impl FnMut(u32, &Rat) -> Result<Rat>) -> Result<Expansion> {
        let mut out = Expansion::new();
        for (&(l, m), c) in &self.coeffs {
            out.insert(l, m, f(l, c)?);
        }
        Ok(out)
    }
}

fn multiplier(spectrum: &MultiplierSpectrum, l: u32) -> Result<&Rat> {
    spectrum.get(l).ok_or_else(|| {
        Error::Precondition(format!("degree {l} exceeds the spectrum's range {}", spectrum.lmax()))
    })
}

/// Scale every degree-`l` component by `m_l`, with no domain check.
pub fn apply_multipliers(f: &Expansion, spectrum: &MultiplierSpectrum) -> Result<Expansion> {
    f.map_degrees(|l, c| Ok(c * multiplier(spectrum, l)?))
}

/// `Φ` restricted to the truncated space `Z`.
pub fn phi_transform(f: &Expansion, spectrum: &MultiplierSpectrum) -> Result<Expansion> {
    if !f.in_z() {
        return Err(Error::Precondition(
            "input must be even with vanishing degree-2 component".into(),
        ));
    }
    apply_multipliers(f, spectrum)
}

/// `Φ⁻¹` on the truncated space `Z`.
pub fn phi_inverse(f: &Expansion, spectrum: &MultiplierSpectrum) -> Result<Expansion> {
    if !f.in_z() {
        return Err(Error::Precondition(
            "input must be even with vanishing degree-2 component".into(),
        ));
    }
    f.map_degrees(|l, c| {
        let m = multiplier(spectrum, l)?;
        if m.is_zero() {
            return Err(Error::Precondition(format!("multiplier of degree {l} vanishes")));
        }
        Ok(c / m)
    })
}
