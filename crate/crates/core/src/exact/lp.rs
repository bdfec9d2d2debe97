use num_traits::{One, Signed, Zero};

use super::{MatQ, Rat, SymMapQ, VecQ};

/// Result of phase 1 on `A x = b, x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phase1 {
    Feasible(VecQ),
    /// `y` with `yᵀA_j <= 0` for every column and `yᵀb > 0`.
    Infeasible(VecQ),
}

/// Phase-1 simplex with Bland's rule over exact rationals.
pub fn simplex_phase1(a: &MatQ, b: &[Rat]) -> Phase1 {
    let rows = a.rows();
    let n = a.cols();
    assert_eq!(rows, b.len(), "phase1 dimension");
    let width = n + rows + 1;
    // Tableau [S A | I | S b] with S flipping rows so the right-hand side is nonnegative.
    let mut sign = vec![Rat::one(); rows];
    let mut t = MatQ::zeros(rows, width);
    for i in 0..rows {
        if b[i].is_negative() {
            sign[i] = -Rat::one();
        }
        for j in 0..n {
            t[(i, j)] = &sign[i] * &a[(i, j)];
        }
        t[(i, n + i)] = Rat::one();
        t[(i, width - 1)] = &sign[i] * &b[i];
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();
    // Reduced costs of the phase-1 objective (sum of artificials).
    let mut cost = vec![Rat::zero(); width];
    for j in 0..width {
        if (n..n + rows).contains(&j) {
            continue;
        }
        let s: Rat = (0..rows).map(|i| t[(i, j)].clone()).sum();
        cost[j] = -s;
    }

    loop {
        let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..rows {
            if !t[(i, enter)].is_positive() {
                continue;
            }
            let ratio = &t[(i, width - 1)] / &t[(i, enter)];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase 1 is bounded below by zero, so some row always qualifies.
        let (r, _) = leave.expect("phase-1 objective is bounded");
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }

    let value = -cost[width - 1].clone();
    if value.is_zero() {
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[(i, width - 1)].clone();
            }
        }
        Phase1::Feasible(x)
    } else {
        // Artificial column k has reduced cost 1 - y'_k.
        let y = (0..rows)
            .map(|k| &sign[k] * (Rat::one() - &cost[n + k]))
            .collect();
        Phase1::Infeasible(y)
    }
}

fn pivot(t: &mut MatQ, cost: &mut [Rat], r: usize, c: usize) {
    let width = t.cols();
    let inv = Rat::one() / &t[(r, c)];
    for j in 0..width {
        let v = &t[(r, j)] * &inv;
        t[(r, j)] = v;
    }
    for i in 0..t.rows() {
        if i == r || t[(i, c)].is_zero() {
            continue;
        }
        let f = t[(i, c)].clone();
        for j in 0..width {
            let v = &t[(r, j)] * &f;
            t[(i, j)] -= v;
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for j in 0..width {
            cost[j] -= &t[(r, j)] * &f;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// `coeffs >= 0` with `sum coeffs_i maps_i = target` exactly.
    Feasible { coeffs: VecQ },
    /// `<certificate, maps_i> < 0` for all `i` and `<certificate, target> > 0`.
    /// `strict` is false only when the maps admit a vanishing nonnegative
    /// combination, in which case some `<certificate, maps_i>` may be zero.
    Infeasible { certificate: SymMapQ, strict: bool },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }
}

/// Decide whether `target` is a nonnegative combination of `maps`.
///
/// Identical maps are merged before the simplex runs; their common coefficient
/// is split evenly among the copies afterwards.
pub fn lp_feasible_nonneg(maps: &[SymMapQ], target: &SymMapQ) -> LpOutcome {
    let n = target.dim();
    let mut unique: Vec<&SymMapQ> = Vec::new();
    let mut group_of = Vec::with_capacity(maps.len());
    for m in maps {
        assert_eq!(m.dim(), n, "map dimension");
        match unique.iter().position(|u| *u == m) {
            Some(g) => group_of.push(g),
            None => {
                group_of.push(unique.len());
                unique.push(m);
            }
        }
    }
    let b = target.upper();
    let cols: Vec<VecQ> = unique.iter().map(|m| m.upper()).collect();
    let a = if cols.is_empty() {
        MatQ::zeros(b.len(), 0)
    } else {
        MatQ::from_cols(&cols).expect("uniform columns")
    };

    match simplex_phase1(&a, &b) {
        Phase1::Feasible(x) => {
            let mut counts = vec![0i64; unique.len()];
            for &g in &group_of {
                counts[g] += 1;
            }
            let coeffs = group_of
                .iter()
                .map(|&g| &x[g] / Rat::from_integer(counts[g].into()))
                .collect();
            LpOutcome::Feasible { coeffs }
        }
        Phase1::Infeasible(y) => {
            let weak = SymMapQ::from_upper_dual(n, &y);
            let (certificate, strict) = strictify(weak, maps, target);
            LpOutcome::Infeasible { certificate, strict }
        }
    }
}

/// Turn `<Y, maps_i> <= 0` into a strict inequality on every map, keeping
/// `<Y, target> > 0`.
fn strictify(y: SymMapQ, maps: &[SymMapQ], target: &SymMapQ) -> (SymMapQ, bool) {
    let n = target.dim();
    let tight: Vec<&SymMapQ> = maps.iter().filter(|m| y.inner(m).is_zero()).collect();
    if tight.is_empty() {
        return (y, true);
    }
    // Gordan: either sum v_i Q_i = 0 with v >= 0, sum v = 1, or a direction D
    // with <D, Q_i> < 0 on every tight map.
    let dim = n * (n + 1) / 2;
    let mut a = MatQ::zeros(dim + 1, tight.len());
    for (j, m) in tight.iter().enumerate() {
        for (i, v) in m.upper().into_iter().enumerate() {
            a[(i, j)] = v;
        }
        a[(dim, j)] = Rat::one();
    }
    let mut b = vec![Rat::zero(); dim + 1];
    b[dim] = Rat::one();
    let d = match simplex_phase1(&a, &b) {
        Phase1::Feasible(_) => return (y, false),
        Phase1::Infeasible(w) => SymMapQ::from_upper_dual(n, &w[..dim]),
    };

    // Largest step keeping the already-strict inequalities strict.
    let mut step = Rat::one();
    let mut limit = |slack: Rat, drift: Rat| {
        // slack > 0 must stay > 0 after adding step * drift
        if drift.is_negative() {
            let bound = &slack / (-drift) / Rat::from_integer(2.into());
            if bound < step {
                step = bound;
            }
        }
    };
    limit(y.inner(target), d.inner(target));
    for m in maps {
        let v = y.inner(m);
        if !v.is_zero() {
            limit(-v, -d.inner(m));
        }
    }
    (y.add(&d.scale(&step)), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn check_outcome(maps: &[SymMapQ], target: &SymMapQ, out: &LpOutcome) {
        match out {
            LpOutcome::Feasible { coeffs } => {
                let mut sum = SymMapQ::zeros(target.dim());
                for (c, m) in coeffs.iter().zip(maps) {
                    assert!(!c.is_negative());
                    sum = sum.add(&m.scale(c));
                }
                assert_eq!(&sum, target);
            }
            LpOutcome::Infeasible { certificate, strict } => {
                assert!(*strict);
                assert!(certificate.inner(target).is_positive());
                for m in maps {
                    assert!(certificate.inner(m).is_negative());
                }
            }
        }
    }

    #[test]
    fn identity_feasible() {
        let id = SymMapQ::identity(3);
        let out = lp_feasible_nonneg(&[id.clone()], &id);
        assert_eq!(out, LpOutcome::Feasible { coeffs: vec![int(1)] });
    }

    #[test]
    fn negative_identity_infeasible() {
        let id = SymMapQ::identity(3);
        let maps = [id.scale(&int(-1))];
        let out = lp_feasible_nonneg(&maps, &id);
        assert!(!out.is_feasible());
        check_outcome(&maps, &id, &out);
        // The documented certificate M = Id also works.
        assert!(id.inner(&maps[0]).is_negative() && id.trace().is_positive());
    }

    #[test]
    fn duplicates_split_evenly() {
        let id = SymMapQ::identity(2);
        let half = id.scale(&rat(1, 2));
        let out = lp_feasible_nonneg(&[half.clone(), half], &id);
        assert_eq!(out, LpOutcome::Feasible { coeffs: vec![int(1), int(1)] });
    }

    #[test]
    fn tight_certificate_gets_strictified() {
        // diag(1,0) and diag(0,0)-ish rank-one maps that cannot reach Id.
        let e11 = SymMapQ::outer(&[int(1), int(0)], &int(1));
        let e12 = SymMapQ::outer(&[int(1), int(1)], &int(1));
        let maps = [e11, e12];
        let id = SymMapQ::identity(2);
        let out = lp_feasible_nonneg(&maps, &id);
        check_outcome(&maps, &id, &out);
    }

    #[test]
    fn non_pointed_cone_is_flagged() {
        let q = SymMapQ::outer(&[int(1), int(0)], &int(1));
        let maps = [q.clone(), q.scale(&int(-1))];
        let id = SymMapQ::identity(2);
        match lp_feasible_nonneg(&maps, &id) {
            LpOutcome::Infeasible { strict, certificate } => {
                assert!(!strict);
                assert!(certificate.inner(&id).is_positive());
            }
            _ => panic!("Id is not in the span of diag(1,0)"),
        }
    }

    #[test]
    fn empty_map_set() {
        let id = SymMapQ::identity(2);
        let out = lp_feasible_nonneg(&[], &id);
        check_outcome(&[], &id, &out);
    }
}
