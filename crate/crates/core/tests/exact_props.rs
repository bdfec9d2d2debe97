use covering_core::exact::{
    int, lp_feasible_nonneg, min_norm_solution, rat, solve_affine, LpOutcome, MatQ, Rat, SymMapQ,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn matrix(n: usize) -> impl Strategy<Value = MatQ> {
    prop::collection::vec(small_rat(), n * n)
        .prop_map(move |v| MatQ::from_rows(v.chunks(n).map(|r| r.to_vec()).collect()).unwrap())
}

fn sym(n: usize) -> impl Strategy<Value = SymMapQ> {
    matrix(n).prop_map(|m| SymMapQ::from_mat(&m.add(&m.transpose())).unwrap())
}

/// Leibniz expansion, independent of the elimination code.
fn leibniz(m: &MatQ) -> Rat {
    let n = m.rows();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut total = Rat::zero();
    permute(&mut idx, 0, m, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, m: &MatQ, total: &mut Rat) {
    if k == p.len() {
        let inversions = (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term: Rat = (0..p.len()).map(|i| m[(i, p[i])].clone()).product();
        if inversions % 2 == 1 {
            term = -term;
        }
        *total += term;
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, m, total);
        p.swap(k, i);
    }
}

#[test]
fn determinant_examples() {
    assert_eq!(MatQ::identity(3).det().unwrap(), int(1));
    let b = MatQ::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[1, 1, 1]]);
    assert_eq!(b.det().unwrap(), int(4));
    assert_eq!(leibniz(&b), int(4));
    let s = MatQ::from_i64(&[&[1, 2, 3], &[1, 2, 3], &[0, 1, 5]]);
    assert_eq!(s.det().unwrap(), int(0));
    assert!(MatQ::zeros(2, 3).det().is_err());
}

#[test]
fn lp_examples() {
    let id = SymMapQ::identity(3);
    match lp_feasible_nonneg(&[id.clone()], &id) {
        LpOutcome::Feasible { coeffs } => assert_eq!(coeffs, vec![int(1)]),
        other => panic!("{other:?}"),
    }
    let neg = id.scale(&int(-1));
    match lp_feasible_nonneg(&[neg.clone()], &id) {
        LpOutcome::Infeasible { certificate, strict } => {
            assert!(strict);
            assert!(certificate.inner(&neg).is_negative());
            assert!(certificate.inner(&id).is_positive());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn min_norm_examples() {
    let id = SymMapQ::identity(3);
    assert!(min_norm_solution(&[(id.clone(), int(0))]).unwrap().is_zero());
    assert_eq!(min_norm_solution(&[(id.clone(), int(3))]).unwrap(), id);
    let e00 = SymMapQ::outer(&[int(1), int(0), int(0)], &int(1));
    let e11 = SymMapQ::outer(&[int(0), int(1), int(0)], &int(1));
    let m = min_norm_solution(&[(e00.clone(), int(2)), (e11.clone(), rat(-1, 3))]).unwrap();
    assert_eq!(m, e00.scale(&int(2)).add(&e11.scale(&rat(-1, 3))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn det_matches_leibniz(a in matrix(4)) {
        prop_assert_eq!(a.det().unwrap(), leibniz(&a));
    }

    #[test]
    fn solve_affine_is_exact(a in matrix(3), x in prop::collection::vec(small_rat(), 3)) {
        let b = a.mul_vec(&x);
        let sol = solve_affine(&a, &b).unwrap();
        let p = sol.particular.clone().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&p), b.clone());
        prop_assert_eq!(sol.nullspace_basis.len(), 3 - a.rank());
        for v in &sol.nullspace_basis {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_roundtrip(a in matrix(3)) {
        prop_assume!(!a.det().unwrap().is_zero());
        prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), MatQ::identity(3));
    }

    #[test]
    fn lp_certificates_are_valid(maps in prop::collection::vec(sym(3), 1..6), target in sym(3)) {
        match lp_feasible_nonneg(&maps, &target) {
            LpOutcome::Feasible { coeffs } => {
                prop_assert!(coeffs.iter().all(|c| !c.is_negative()));
                let sum = coeffs.iter().zip(&maps).fold(SymMapQ::zeros(3), |acc, (c, m)| acc.add(&m.scale(c)));
                prop_assert_eq!(sum, target);
            }
            LpOutcome::Infeasible { certificate, strict } => {
                prop_assert!(certificate.inner(&target).is_positive());
                for m in &maps {
                    let v = certificate.inner(m);
                    let ok = if strict { v.is_negative() } else { !v.is_positive() };
                    prop_assert!(ok);
                }
            }
        }
    }

    #[test]
    fn min_norm_is_linear(r1 in prop::collection::vec(small_rat(), 3), r2 in prop::collection::vec(small_rat(), 3), c in small_rat()) {
        let maps = [
            SymMapQ::identity(3),
            SymMapQ::outer(&[int(1), int(1), int(0)], &int(1)),
            SymMapQ::outer(&[int(0), int(1), int(-1)], &int(1)),
        ];
        let solve = |r: &[Rat]| {
            let cons: Vec<(SymMapQ, Rat)> = maps.iter().cloned().zip(r.iter().cloned()).collect();
            min_norm_solution(&cons).unwrap()
        };
        let combo: Vec<Rat> = r1.iter().zip(&r2).map(|(a, b)| a + &c * b).collect();
        let lhs = solve(&combo);
        prop_assert_eq!(lhs.clone(), solve(&r1).add(&solve(&r2).scale(&c)));
        for (m, r) in maps.iter().zip(&combo) {
            prop_assert_eq!(lhs.inner(m), r.clone());
        }
    }
}
