//! Real spherical harmonics orthonormal for the normalized surface measure
//! `σ` (`σ(S²) = 1`), and product quadrature on the sphere.
//!
//! `Y_l0 = √(2l+1) P_l(z)`, and for `m ≠ 0`
//! `Y_lm = √2 N_l|m| P_l^|m|(z) · cos(mφ)` (`m > 0`) or `· sin(|m|φ)` (`m < 0`),
//! with `N_lm = √((2l+1)(l−m)!/(l+m)!)` and no Condon–Shortley phase.
//! Hence `Σ_m Y_lm(x)² = 2l+1` at every point and `|Y_lm| <= √(2l+1)`.

/// `N_lm P_l^m(z)` for `0 <= m <= l <= lmax`, indexed `[l][m]`.
pub fn normalized_assoc_legendre(lmax: usize, z: f64) -> Vec<Vec<f64>> {
    let s = (1.0 - z * z).max(0.0).sqrt();
    let mut p: Vec<Vec<f64>> = (0..=lmax).map(|l| vec![0.0; l + 1]).collect();
    p[0][0] = 1.0;
    for m in 1..=lmax {
        let mf = m as f64;
        p[m][m] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[m - 1][m - 1];
    }
    for m in 0..lmax {
        p[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * z * p[m][m];
    }
    for m in 0..=lmax {
        for l in m + 2..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            p[l][m] = a * (z * p[l - 1][m] - b * p[l - 2][m]);
        }
    }
    p
}

/// All `Y_lm(x)` for `l <= lmax`, indexed by [`sh_index`]. `x` need not be unit.
pub fn real_sh_all(lmax: usize, x: [f64; 3]) -> Vec<f64> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let z = (x[2] / r).clamp(-1.0, 1.0);
    let phi = x[1].atan2(x[0]);
    let p = normalized_assoc_legendre(lmax, z);
    let mut out = vec![0.0; (lmax + 1) * (lmax + 1)];
    for l in 0..=lmax {
        out[sh_index(l, 0)] = p[l][0];
        for m in 1..=l {
            let mf = m as f64;
            let v = std::f64::consts::SQRT_2 * p[l][m];
            out[sh_index(l, m as i32)] = v * (mf * phi).cos();
            out[sh_index(l, -(m as i32))] = v * (mf * phi).sin();
        }
    }
    out
}

pub fn real_sh(l: usize, m: i32, x: [f64; 3]) -> f64 {
    real_sh_all(l, x)[sh_index(l, m)]
}

/// Position of `(l, m)` in the flat layout `l² + l + m`.
pub fn sh_index(l: usize, m: i32) -> usize {
    ((l * l + l) as i64 + m as i64) as usize
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Product rule on the sphere, exact for polynomials of degree `<= degree`,
/// with weights summing to 1 (the measure `σ`).
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(degree: usize) -> Self {
        let nz = degree / 2 + 1;
        let nphi = degree + 1;
        let mut points = Vec::with_capacity(nz * nphi);
        let mut weights = Vec::with_capacity(nz * nphi);
        for (z, w) in gauss_legendre(nz) {
            let s = (1.0 - z * z).sqrt();
            for k in 0..nphi {
                let phi = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / nphi as f64;
                points.push([s * phi.cos(), s * phi.sin(), z]);
                weights.push(w / 2.0 / nphi as f64);
            }
        }
        SphereQuadrature { points, weights }
    }

    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}
