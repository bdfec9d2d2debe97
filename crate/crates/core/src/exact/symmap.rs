use num_traits::{One, Zero};

use super::{solve_affine, MatQ, Rat, VecQ};
use crate::error::{Error, Result};

/// Symmetric n×n rational matrix with the trace inner product
/// `<A, B> = trace(AB) = sum_ij A_ij B_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMapQ {
    n: usize,
    entries: Vec<Rat>,
}

impl SymMapQ {
    pub fn zeros(n: usize) -> Self {
        SymMapQ {
            n,
            entries: vec![Rat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = Self::zeros(n);
        for i in 0..n {
            s.entries[i * n + i] = Rat::one();
        }
        s
    }

    pub fn from_mat(m: &MatQ) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = m.rows();
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                s.entries[i * n + j] = m[(i, j)].clone();
            }
        }
        Ok(s)
    }

    /// `c · x xᵀ`.
    pub fn outer(x: &[Rat], c: &Rat) -> Self {
        let n = x.len();
        let mut s = Self::zeros(n);
        for i in 0..n {
            let cx = c * &x[i];
            for j in 0..n {
                s.entries[i * n + j] = &cx * &x[j];
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn to_mat(&self) -> MatQ {
        let rows = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        MatQ::from_rows(rows).expect("square")
    }

    pub fn to_rows(&self) -> Vec<VecQ> {
        self.to_mat().to_rows()
    }

    pub fn inner(&self, other: &SymMapQ) -> Rat {
        assert_eq!(self.n, other.n, "inner product dimension");
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn add(&self, other: &SymMapQ) -> SymMapQ {
        assert_eq!(self.n, other.n);
        SymMapQ {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMapQ) -> SymMapQ {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> SymMapQ {
        SymMapQ {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Quadratic form `xᵀ S x`.
    pub fn quad(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &x[i] * self.get(i, j) * &x[j];
            }
        }
        acc
    }

    /// Upper-triangle coordinates `(S_ij)_{i<=j}`, row by row.
    pub fn upper(&self) -> VecQ {
        let mut v = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                v.push(self.get(i, j).clone());
            }
        }
        v
    }

    /// The symmetric map `Y` with `<Y, S> = sum_{i<=j} y_ij S_ij` for every symmetric `S`.
    pub fn from_upper_dual(n: usize, y: &[Rat]) -> Self {
        let two = Rat::from_integer(2.into());
        let mut s = Self::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                if i == j {
                    s.entries[i * n + i] = y[k].clone();
                } else {
                    let half = &y[k] / &two;
                    s.entries[i * n + j] = half.clone();
                    s.entries[j * n + i] = half;
                }
                k += 1;
            }
        }
        s
    }
}

/// The unique `M` of least `<M, M>` with `<M, Q_i> = r_i` for every constraint,
/// found in the span of the `Q_i` through the normal equations.
pub fn min_norm_solution(constraints: &[(SymMapQ, Rat)]) -> Result<SymMapQ> {
    let Some((first, _)) = constraints.first() else {
        return Err(Error::Dimension("no constraints".into()));
    };
    let n = first.dim();
    let k = constraints.len();
    let mut gram = MatQ::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = constraints[i].0.inner(&constraints[j].0);
        }
    }
    let rhs: VecQ = constraints.iter().map(|(_, r)| r.clone()).collect();
    let sol = solve_affine(&gram, &rhs)?;
    if let Some(w) = sol.nullspace_basis.into_iter().next() {
        return Err(Error::DependentConstraints { witness: w });
    }
    let lambda = sol.particular.ok_or(Error::Singular)?;
    let mut m = SymMapQ::zeros(n);
    for ((q, _), l) in constraints.iter().zip(&lambda) {
        m = m.add(&q.scale(l));
    }
    Ok(m)
}
