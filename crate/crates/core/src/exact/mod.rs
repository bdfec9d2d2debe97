//! Exact rational arithmetic: scalars, dense matrices, symmetric maps, and a
//! phase-1 simplex that returns either a nonnegative solution or a Farkas
//! certificate.

mod lp;
mod matrix;
mod symmap;

pub use lp::{lp_feasible_nonneg, simplex_phase1, LpOutcome, Phase1};
pub use matrix::{solve_affine, LinSolveResult, MatQ};
pub use symmap::{min_norm_solution, SymMapQ};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub type VecQ = Vec<Rat>;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// `"p/q"` (or `"p"` for integers).
pub fn fmt_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn parse_vec(v: &[String]) -> Result<VecQ> {
    v.iter().map(|s| parse_rat(s)).collect()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational on the dyadic grid `2^-bits`.
pub fn from_f64_grid(x: f64, bits: u32) -> Rat {
    let scale = 2f64.powi(bits as i32);
    let n = (x * scale).round();
    Rat::new(
        BigInt::from(n as i128),
        BigInt::one() << bits as usize,
    )
}

/// Smallest grid rational `>= x` on the dyadic grid `2^-bits`.
pub fn from_f64_ceil(x: f64, bits: u32) -> Rat {
    let scale = 2f64.powi(bits as i32);
    let n = (x * scale).ceil();
    Rat::new(BigInt::from(n as i128), BigInt::one() << bits as usize)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> VecQ {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> VecQ {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(c: &Rat, a: &[Rat]) -> VecQ {
    a.iter().map(|x| c * x).collect()
}

pub fn neg_vec(a: &[Rat]) -> VecQ {
    a.iter().map(|x| -x).collect()
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// `x^k` for a nonnegative integer exponent.
pub fn pow(x: &Rat, k: u32) -> Rat {
    let mut acc = one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

pub fn int_vec(v: &[i64]) -> VecQ {
    v.iter().map(|&x| int(x)).collect()
}
