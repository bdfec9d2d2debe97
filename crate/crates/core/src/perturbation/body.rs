//! Nearly spherical bodies `r_K = 1 + ρ` given by even real spherical-harmonic
//! expansions, their rotations, and a deterministic rotation grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::sph::{real_sh_all, sh_index, SphereQuadrature};

/// Radial perturbation of the unit sphere, evaluated in floating point.
pub trait RadialFunction: Sync {
    /// `ρ(x)` for a nonzero direction `x`.
    fn rho(&self, dir: [f64; 3]) -> f64;
    /// Certified bound `|ρ| <= eps` everywhere.
    fn eps(&self) -> f64;
}

/// One term of the body file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub degree: u32,
    pub order: i32,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialBody {
    lmax: usize,
    /// Dense coefficients in the [`sh_index`] layout.
    coeffs: Vec<f64>,
    eps: f64,
    normalized: bool,
}

impl RadialBody {
    /// The unit ball.
    pub fn ball() -> Self {
        RadialBody {
            lmax: 0,
            coeffs: vec![0.0],
            eps: 0.0,
            normalized: true,
        }
    }

    /// `ρ ≡ c`, a scaled ball; not normalized.
    pub fn constant(c: f64) -> Self {
        RadialBody {
            lmax: 0,
            coeffs: vec![c],
            eps: c.abs(),
            normalized: false,
        }
    }

    /// Build from terms; repeated `(degree, order)` pairs are summed. Odd
    /// degrees are rejected; the body is normalized when degrees 0 and 2 are absent.
    pub fn from_terms(terms: &[HarmonicTerm]) -> Result<Self> {
        let lmax = terms.iter().map(|t| t.degree as usize).max().unwrap_or(0);
        let mut coeffs = vec![0.0; (lmax + 1) * (lmax + 1)];
        for t in terms {
            if t.order.unsigned_abs() > t.degree {
                return Err(Error::Precondition(format!(
                    "order {} exceeds degree {}",
                    t.order, t.degree
                )));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::Precondition("non-finite coefficient".into()));
            }
            if t.degree % 2 == 1 && t.coefficient != 0.0 {
                return Err(Error::Precondition(format!(
                    "odd degree {} breaks origin symmetry",
                    t.degree
                )));
            }
            coeffs[sh_index(t.degree as usize, t.order)] += t.coefficient;
        }
        let normalized = (0..=lmax.min(2))
            .filter(|l| l % 2 == 0)
            .all(|l| (-(l as i32)..=l as i32).all(|m| coeffs[sh_index(l, m)] == 0.0));
        let eps = certified_eps(lmax, &coeffs);
        Ok(RadialBody {
            lmax,
            coeffs,
            eps,
            normalized,
        })
    }

    /// `a/3 · Y_40`, whose maximum `|ρ|` is exactly `a`, attained at the poles.
    pub fn zonal_degree4(amplitude: f64) -> Self {
        Self::from_terms(&[HarmonicTerm {
            degree: 4,
            order: 0,
            coefficient: amplitude / 3.0,
        }])
        .expect("valid term")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let terms: Vec<HarmonicTerm> = serde_json::from_str(text)?;
        Self::from_terms(&terms)
    }

    pub fn terms(&self) -> Vec<HarmonicTerm> {
        let mut out = Vec::new();
        for l in 0..=self.lmax {
            for m in -(l as i32)..=l as i32 {
                let c = self.coeffs[sh_index(l, m)];
                if c != 0.0 {
                    out.push(HarmonicTerm {
                        degree: l as u32,
                        order: m,
                        coefficient: c,
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.terms()).expect("serializable")
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn coefficient(&self, l: usize, m: i32) -> f64 {
        if l > self.lmax {
            return 0.0;
        }
        self.coeffs[sh_index(l, m)]
    }

    /// `Σ_l c_l ρ_l(x)` for a multiplier sequence indexed by degree.
    pub fn multiplied(&self, multipliers: &[f64], dir: [f64; 3]) -> f64 {
        let y = real_sh_all(self.lmax, canonical(dir));
        let mut acc = 0.0;
        for l in 0..=self.lmax {
            let c = multipliers.get(l).copied().unwrap_or(0.0);
            if c == 0.0 {
                continue;
            }
            for m in -(l as i32)..=l as i32 {
                let k = sh_index(l, m);
                acc += c * self.coeffs[k] * y[k];
            }
        }
        acc
    }

    /// `vol K / vol B³ = ∫ (1+ρ)³ dσ`, exact up to rounding since the integrand
    /// is a polynomial of degree `3·lmax`.
    pub fn volume_ratio(&self) -> f64 {
        let q = SphereQuadrature::new(3 * self.lmax + 1);
        q.integrate(|x| (1.0 + self.rho(x)).powi(3))
    }

    /// `‖ρ‖₁ = ∫ |ρ| dσ`, by an oversampled product rule.
    pub fn l1_norm(&self) -> f64 {
        let q = SphereQuadrature::new(8 * self.lmax.max(4) + 1);
        q.integrate(|x| self.rho(x).abs())
    }
}

/// `Σ_l √(2l+1) ‖c_l‖₂`, a bound on `max |ρ|` by the addition theorem.
fn certified_eps(lmax: usize, coeffs: &[f64]) -> f64 {
    (0..=lmax)
        .map(|l| {
            let norm: f64 = (-(l as i32)..=l as i32)
                .map(|m| coeffs[sh_index(l, m)].powi(2))
                .sum::<f64>()
                .sqrt();
            ((2 * l + 1) as f64).sqrt() * norm
        })
        .sum()
}

/// Representative of `±x` in the closed upper half-space, so that even
/// functions evaluate to bitwise-identical values at antipodes.
fn canonical(x: [f64; 3]) -> [f64; 3] {
    let flip = x[2] < 0.0 || (x[2] == 0.0 && (x[1] < 0.0 || (x[1] == 0.0 && x[0] < 0.0)));
    if flip {
        [-x[0], -x[1], -x[2]]
    } else {
        x
    }
}

impl RadialFunction for RadialBody {
    fn rho(&self, dir: [f64; 3]) -> f64 {
        if self.lmax == 0 {
            return self.coeffs[0];
        }
        let y = real_sh_all(self.lmax, canonical(dir));
        self.coeffs.iter().zip(&y).map(|(c, v)| c * v).sum()
    }

    fn eps(&self) -> f64 {
        self.eps
    }
}

/// Proper rotation as a row-major 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(pub [[f64; 3]; 3]);

impl Rotation {
    pub fn identity() -> Self {
        Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// From a unit quaternion `(w, x, y, z)`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let [w, x, y, z] = q;
        Rotation([
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ])
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let r = &self.0;
        [0, 1, 2].map(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2])
    }

    pub fn apply_inverse(&self, v: [f64; 3]) -> [f64; 3] {
        let r = &self.0;
        [0, 1, 2].map(|i| r[0][i] * v[0] + r[1][i] * v[1] + r[2][i] * v[2])
    }
}

/// `U(K)`: `r_{UK}(x) = r_K(U⁻¹ x)`.
pub struct Rotated<'a, B: RadialFunction> {
    pub body: &'a B,
    pub rotation: Rotation,
}

impl<B: RadialFunction> RadialFunction for Rotated<'_, B> {
    fn rho(&self, dir: [f64; 3]) -> f64 {
        self.body.rho(self.rotation.apply_inverse(dir))
    }

    fn eps(&self) -> f64 {
        self.body.eps()
    }
}

/// Unit quaternions from a three-dimensional Kronecker sequence pushed through
/// Shoemake's uniform map. Entry 0 is the identity; every prefix of a larger
/// grid is the smaller grid.
pub fn rotation_grid(count: usize) -> Vec<([f64; 4], Rotation)> {
    // Real root of x⁴ = x + 1 gives the standard R3 sequence.
    let g: f64 = 1.220_744_084_605_759_5;
    let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    (0..count)
        .map(|k| {
            if k == 0 {
                return ([1.0, 0.0, 0.0, 0.0], Rotation::identity());
            }
            let u = alpha.map(|a| (0.5 + a * k as f64).fract());
            let tau = 2.0 * std::f64::consts::PI;
            let (s1, s2) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
            let q = [
                s2 * (tau * u[2]).cos(),
                s1 * (tau * u[1]).sin(),
                s1 * (tau * u[1]).cos(),
                s2 * (tau * u[2]).sin(),
            ];
            (q, Rotation::from_quaternion(q))
        })
        .collect()
}

/// Points of a spherical Fibonacci lattice, for locating extrema.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = 2.0 * std::f64::consts::PI * i as f64 / golden;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}
