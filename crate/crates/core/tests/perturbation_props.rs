use covering_core::exact::{from_f64_grid, int, one, pow, rat, MatQ, Rat, SymMapQ};
use covering_core::lattice::{build_anstar, covering_radius};
use covering_core::perturbation::{
    build_cover, cr_after, cr_after_form, extension_witness, first_order_cr, rotation_grid, solve_treqn,
    CoverSetup, HarmonicTerm, RadialBody, RadialFunction, Rotated,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_entry() -> impl Strategy<Value = Rat> {
    (-10i64..=10).prop_map(|p| rat(p, 300))
}

fn small_matrix() -> impl Strategy<Value = MatQ> {
    prop::collection::vec(small_entry(), 9)
        .prop_map(|v| MatQ::from_rows(v.chunks(3).map(|r| r.to_vec()).collect()).unwrap())
}

/// Euclidean symmetric `M` pulled back to a form on lattice coordinates.
fn lattice_form(m: &MatQ) -> SymMapQ {
    let lat = build_anstar(3).unwrap();
    let e = lat.embedding.unwrap();
    let sym = m.add(&m.transpose()).scale(&rat(1, 2));
    SymMapQ::from_mat(&e.transpose().mul(&sym).unwrap().mul(&e).unwrap()).unwrap()
}

fn body_terms() -> impl Strategy<Value = Vec<HarmonicTerm>> {
    prop::collection::vec((prop::sample::select(vec![4u32, 6, 8]), -8i32..=8, -1.0f64..1.0), 1..5).prop_map(
        |terms| {
            terms
                .into_iter()
                .map(|(degree, order, c)| HarmonicTerm {
                    degree,
                    order: order.clamp(-(degree as i32), degree as i32),
                    coefficient: c,
                })
                .collect()
        },
    )
}

/// Rescale so that the certified sup-norm bound equals `amplitude`.
fn body_with_amplitude(terms: &[HarmonicTerm], amplitude: f64) -> RadialBody {
    let raw = RadialBody::from_terms(terms).unwrap();
    let k = amplitude / raw.eps();
    let scaled: Vec<HarmonicTerm> = terms
        .iter()
        .map(|t| HarmonicTerm {
            coefficient: t.coefficient * k,
            ..*t
        })
        .collect();
    RadialBody::from_terms(&scaled).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn circumradius_error_is_nonnegative(a in small_matrix()) {
        let lat = build_anstar(3).unwrap();
        let (_, x) = covering_radius(&lat).unwrap();
        let t = MatQ::identity(3).add(&a);
        let g = lat.gram.to_mat();
        let m_form = SymMapQ::from_mat(&t.transpose().mul(&g).unwrap().mul(&t).unwrap()).unwrap().sub(&lat.gram);
        for s in &x {
            let r = cr_after(&t, s, &lat.gram).unwrap();
            prop_assert!(!r.error.is_negative());
            prop_assert_eq!(&r.linear / &s.cr2, first_order_cr(&m_form, s));
            prop_assert!(&r.cr2 / &s.cr2 >= first_order_cr(&m_form, s));
        }
    }

    #[test]
    fn circumradius_error_is_quadratic(m in small_matrix()) {
        let lat = build_anstar(3).unwrap();
        let (_, x) = covering_radius(&lat).unwrap();
        let form = lattice_form(&m);
        let half = form.scale(&rat(1, 2));
        for s in &x {
            let full = cr_after_form(&form, s, &lat.gram).unwrap().error;
            let halved = cr_after_form(&half, s, &lat.gram).unwrap().error;
            if halved.is_zero() {
                prop_assert!(full.is_zero());
                continue;
            }
            let ratio = &full / &halved;
            prop_assert!(ratio >= rat(7, 2) && ratio <= rat(9, 2), "ratio {}", ratio);
        }
    }

    #[test]
    fn cover_for_random_bodies(terms in body_terms(), amp in 0.001f64..0.02) {
        let setup = CoverSetup::new(&build_anstar(3).unwrap()).unwrap();
        let body = body_with_amplitude(&terms, amp);
        let c = build_cover(&body, &setup).unwrap();
        prop_assert!(c.all_inside());
        prop_assert!(c.meets_theorem_bound());
        let d = MatQ::identity(3).add(&c.m.to_mat()).det().unwrap();
        prop_assert_eq!(c.det_ratio.clone(), pow(&(one() - &c.delta), 3) * d);
        let sol = solve_treqn(&setup, &c.rho).unwrap();
        prop_assert_eq!(sol.m, c.m);
    }

    #[test]
    fn constant_rho_scales_the_lattice(p in -20i64..=20) {
        let setup = CoverSetup::new(&build_anstar(3).unwrap()).unwrap();
        let c = rat(p, 1000);
        let rho = vec![vec![c.clone(); 4]; 6];
        let sol = solve_treqn(&setup, &rho).unwrap();
        prop_assert_eq!(sol.m.trace(), int(3) * &c);
        prop_assert!(sol.t.iter().flatten().all(Zero::is_zero));
    }
}

#[test]
fn ball_is_rotation_invariant() {
    let setup = CoverSetup::new(&build_anstar(3).unwrap()).unwrap();
    let ball = RadialBody::ball();
    for (_, rotation) in rotation_grid(12) {
        let c = build_cover(&Rotated { body: &ball, rotation }, &setup).unwrap();
        assert_eq!(c.det_ratio, int(1));
        assert!(c.delta.is_zero());
    }
}

#[test]
fn rotated_body_rho_follows_the_rotation() {
    let body = RadialBody::zonal_degree4(0.01);
    for (_, rotation) in rotation_grid(8) {
        let r = Rotated { body: &body, rotation };
        for d in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.0, -1.0, 0.0]] {
            assert!((r.rho(d) - body.rho(rotation.apply_inverse(d))).abs() < 1e-15);
        }
    }
}

#[test]
fn witnesses_verify_for_every_pair() {
    let lat = build_anstar(3).unwrap();
    for pair in 0..3 {
        let w = extension_witness(&lat, pair, &rat(1, 100)).unwrap();
        assert!(w.det_t > one());
        assert!(w.kept_cr2.iter().all(|(_, c)| *c < w.mu2));
        assert!(w.members.iter().all(|&m| m));
        w.verify(&lat).unwrap();
    }
}

#[test]
fn dyadic_rounding_is_exact_on_the_grid() {
    assert_eq!(from_f64_grid(0.25, 50), rat(1, 4));
    assert_eq!(from_f64_grid(-0.5, 10), rat(-1, 2));
}
