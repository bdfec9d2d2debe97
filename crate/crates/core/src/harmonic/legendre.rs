//! Legendre values at the nodes `t = k/5`, the multiplier coefficients `c_l`,
//! and their nonvanishing certificates.
//!
//! With `Q_l(t) = 5^l · l! · P_l(t)` the three-term recurrence becomes
//! `Q_{l+1} = (2l+1)(5t) Q_l − 25 l² Q_{l−1}`, `Q_0 = 1`, `Q_1 = 5t`, so every
//! `Q_l(k/5)` is an integer and can be reduced modulo 16 step by step.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{int, rat, Rat};

/// Weight of node `k/5` in `c_l`, indexed by `k`.
pub const NODE_WEIGHTS: [i64; 6] = [1, 2, 4, 1, 3, 1];

/// Exact values are kept up to this degree; beyond it only residues.
pub const EXACT_LIMIT: u32 = 200;

/// `Q_l(k/5)` for `l = 0..=lmax`.
pub fn rescaled_q_table(lmax: u32, k: i64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(lmax as usize + 1);
    out.push(BigInt::one());
    if lmax == 0 {
        return out;
    }
    out.push(BigInt::from(k));
    for l in 1..lmax as i64 {
        let next = BigInt::from((2 * l + 1) * k) * &out[l as usize]
            - BigInt::from(25 * l * l) * &out[l as usize - 1];
        out.push(next);
    }
    out
}

pub fn rescaled_q(l: u32, k: i64) -> BigInt {
    rescaled_q_table(l, k).pop().expect("non-empty")
}

/// `Q_l(k/5) mod 16` for `l = 0..=lmax`, computed entirely in modular arithmetic.
pub fn rescaled_q_mod16_table(lmax: u32, k: i64) -> Vec<u8> {
    let m = |x: i64| x.rem_euclid(16);
    let mut out = Vec::with_capacity(lmax as usize + 1);
    let (mut prev, mut cur) = (1i64, m(k));
    out.push(1u8);
    if lmax == 0 {
        return out;
    }
    out.push(cur as u8);
    for l in 1..lmax as i64 {
        let a = m((2 * l + 1) * k);
        let b = m(25 * m(l * l));
        let next = m(a * cur - b * prev);
        prev = cur;
        cur = next;
        out.push(cur as u8);
    }
    out
}

pub fn rescaled_q_mod16(l: u32, k: i64) -> u8 {
    *rescaled_q_mod16_table(l, k).last().expect("non-empty")
}

/// Residues of the weighted term `w_k Q_l(k/5) mod 16` of `5^l l! c_l`, by
/// `l mod 8`, when the table up to `lmax` is 8-periodic from `l = 0`.
pub fn weighted_residue_period8(k: i64, lmax: u32) -> Option<[u8; 8]> {
    let w = NODE_WEIGHTS[k as usize] as u32;
    let table: Vec<u8> = rescaled_q_mod16_table(lmax.max(7), k)
        .into_iter()
        .map(|r| (w * r as u32 % 16) as u8)
        .collect();
    let mut row = [0u8; 8];
    row.copy_from_slice(&table[..8]);
    table.iter().enumerate().all(|(l, &r)| r == row[l % 8]).then_some(row)
}

/// Smallest `l` with `Q_l ≡ Q_{l+1} ≡ 0 (mod 16)` at `t = k/5`; the recurrence
/// keeps every later residue at zero from there on.
pub fn residue_vanishing_start(k: i64, lmax: u32) -> Option<u32> {
    let table = rescaled_q_mod16_table(lmax, k);
    table.windows(2).position(|w| w == [0, 0]).map(|l| l as u32)
}

/// Exact `P_l(t)` by the standard three-term recurrence.
pub fn legendre_rational(l: u32, t: &Rat) -> Rat {
    legendre_rational_table(l, t).pop().expect("non-empty")
}

pub fn legendre_rational_table(lmax: u32, t: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::one()];
    if lmax == 0 {
        return out;
    }
    out.push(t.clone());
    for l in 1..lmax as i64 {
        let li = l as usize;
        let next = (int(2 * l + 1) * t * &out[li] - int(l) * &out[li - 1]) / int(l + 1);
        out.push(next);
    }
    out
}

/// `P_l(t)` in floating point for `l = 0..=lmax`.
pub fn legendre_f64_table(lmax: u32, t: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    if lmax == 0 {
        return out;
    }
    out.push(t);
    for l in 1..lmax as usize {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * t * out[l] - lf * out[l - 1]) / (lf + 1.0);
        out.push(next);
    }
    out
}

pub fn legendre_f64(l: u32, t: f64) -> f64 {
    *legendre_f64_table(l, t).last().expect("non-empty")
}

/// `5^l · l!`
pub fn rescale_factor(l: u32) -> BigInt {
    let mut f = BigInt::one();
    for i in 1..=l as u64 {
        f *= BigInt::from(5u64 * i);
    }
    f
}

/// Exact `c_l = P_l(1) + 3P_l(4/5) + P_l(3/5) + 4P_l(2/5) + 2P_l(1/5) + P_l(0)`.
pub fn c_l_exact(l: u32) -> Rat {
    (0..6)
        .map(|k| int(NODE_WEIGHTS[k as usize]) * legendre_rational(l, &rat(k, 5)))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClStatus {
    Zero,
    NonzeroExact,
    NonzeroMod16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClCertificate {
    pub l: u32,
    /// Exact value, kept for `l <= EXACT_LIMIT`.
    pub value: Option<Rat>,
    /// `5^l · l! · c_l mod 16`.
    pub residue: u8,
    pub status: ClStatus,
}

/// Certificates for `c_0 … c_lmax`.
///
/// For `l >= 6` a nonzero residue alone proves `c_l != 0`; below that the
/// exact value decides. Where both are available they must agree.
pub fn certify_cl(lmax: u32) -> Vec<ClCertificate> {
    let residues: Vec<Vec<u8>> = (0..6).map(|k| rescaled_q_mod16_table(lmax, k)).collect();
    let exact_top = lmax.min(EXACT_LIMIT);
    let q: Vec<Vec<BigInt>> = (0..6).map(|k| rescaled_q_table(exact_top, k)).collect();
    let mut factor = BigInt::one();
    (0..=lmax)
        .map(|l| {
            let li = l as usize;
            let residue = (0..6)
                .map(|k| NODE_WEIGHTS[k] as u32 * residues[k][li] as u32)
                .sum::<u32>()
                % 16;
            let value = (l <= exact_top).then(|| {
                if l > 0 {
                    factor *= BigInt::from(5u64 * l as u64);
                }
                let num: BigInt = (0..6).map(|k| BigInt::from(NODE_WEIGHTS[k]) * &q[k][li]).sum();
                Rat::new(num, factor.clone())
            });
            let status = match &value {
                Some(v) if v.is_zero() => ClStatus::Zero,
                Some(_) => ClStatus::NonzeroExact,
                None if residue != 0 => ClStatus::NonzeroMod16,
                None => ClStatus::Zero,
            };
            ClCertificate {
                l,
                value,
                residue: residue as u8,
                status,
            }
        })
        .collect()
}

/// `c_l` together with its certificate, for a single degree.
pub fn c_l(l: u32) -> ClCertificate {
    certify_cl(l).pop().expect("non-empty")
}

/// Interior nodes `k/5`, `k = 0..=4`, with their weights.
const INTERIOR: [(f64, f64); 5] = [(0.0, 1.0), (0.2, 2.0), (0.4, 4.0), (0.6, 1.0), (0.8, 3.0)];

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BernsteinReport {
    pub lmax: u32,
    /// Smallest `C` with `|c_l − 1| <= C l^{-1/2}` for all even `2 <= l <= lmax`.
    pub empirical_c: f64,
    /// Degree attaining `empirical_c`.
    pub argmax_l: u32,
    /// `Σ w_k (2 / (π sqrt(1 − t_k²)))^{1/2}` over the interior nodes.
    pub bernstein_c: f64,
    /// `|P_l(t_k)| < (π l sqrt(1 − t_k²)/2)^{-1/2}` held at every node and even degree.
    pub node_bounds_hold: bool,
    pub tolerance: f64,
}

pub fn bernstein_envelope(lmax: u32) -> BernsteinReport {
    let tolerance = 1e-9;
    let lmax = lmax.max(2);
    let tables: Vec<Vec<f64>> = INTERIOR.iter().map(|&(t, _)| legendre_f64_table(lmax, t)).collect();
    let mut empirical_c: f64 = 0.0;
    let mut argmax_l = 2;
    let mut node_bounds_hold = true;
    for l in (2..=lmax).step_by(2) {
        let li = l as usize;
        let lf = l as f64;
        // P_l(1) = 1 cancels the "− 1".
        let dev: f64 = INTERIOR
            .iter()
            .zip(&tables)
            .map(|(&(_, w), tab)| w * tab[li])
            .sum();
        let c = dev.abs() * lf.sqrt();
        if c > empirical_c + tolerance {
            empirical_c = c;
            argmax_l = l;
        }
        for (&(t, _), tab) in INTERIOR.iter().zip(&tables) {
            let bound = (std::f64::consts::PI * lf * (1.0 - t * t).sqrt() / 2.0).powf(-0.5);
            if tab[li].abs() >= bound + tolerance {
                node_bounds_hold = false;
            }
        }
    }
    let bernstein_c = INTERIOR
        .iter()
        .map(|&(t, w)| w * (2.0 / (std::f64::consts::PI * (1.0 - t * t).sqrt())).sqrt())
        .sum();
    BernsteinReport {
        lmax,
        empirical_c,
        argmax_l,
        bernstein_c,
        node_bounds_hold,
        tolerance,
    }
}
