//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use covering_core::certificate::ball_class_certificate;
use covering_core::eutaxy::{analyze, BallAnalysis, Classification, PairCertificate};
use covering_core::exact::{int, one, rat, solve_affine, sub_vec, to_f64, MatQ, Rat, SymMapQ, VecQ};
use covering_core::harmonic::legendre::{certify_cl, weighted_residue_period8, ClStatus};
use covering_core::harmonic::zonal::zonal_spectrum;
use covering_core::harmonic::c_l_exact;
use covering_core::lattice::{build_anstar, covering_radius, voronoi_vertices};
use covering_core::perturbation::{
    build_cover, cr_after_form, extension_witness, first_order_cr, rotation_scan, CoverSetup, HarmonicTerm,
    RadialBody, RadialFunction, DEFAULT_GRID,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn classification_holds(a: &BallAnalysis, want: Classification) -> bool {
    let r = &a.report;
    if r.classification != want || r.verify(&a.maps, &a.lattice.gram).is_err() {
        return false;
    }
    match want {
        Classification::CriticallySemiEutactic => r.unique && r.positive,
        Classification::RedundantlySemiEutactic => r.removals.iter().enumerate().all(|(k, p)| match p {
            PairCertificate::Feasible { coeffs } => coeffs[k].is_zero() && coeffs.iter().all(|c| !c.is_negative()),
            PairCertificate::Farkas { .. } => false,
        }),
        _ => false,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let want = if n <= 3 {
            Classification::CriticallySemiEutactic
        } else {
            Classification::RedundantlySemiEutactic
        };
        let a = analyze(build_anstar(n).unwrap()).unwrap();
        let good = classification_holds(&a, want);
        ok &= good;
        notes.push(format!("n={n} {:?} ({} pairs)", a.report.classification, a.maps.len()));
    }
    let small = start.elapsed();
    let t5 = Instant::now();
    let a = analyze(build_anstar(5).unwrap()).unwrap();
    ok &= classification_holds(&a, Classification::RedundantlySemiEutactic);
    notes.push(format!("n=5 {:?} ({} pairs)", a.report.classification, a.maps.len()));
    let big = t5.elapsed();
    ok &= within(small, Duration::from_secs(10)) && within(big, Duration::from_secs(300));
    outcome(ok, format!("{}; n<=4 in {}, n=5 in {}", notes.join(", "), secs(small), secs(big)))
}

/// Circumcenter from the equidistance equations `2⟨v_j − v_0, c⟩ = |v_j|² − |v_0|²`.
fn euclidean_circumcenter(v: &[VecQ]) -> VecQ {
    let dot = |a: &[Rat], b: &[Rat]| -> Rat { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let rows: Vec<VecQ> = v[1..].iter().map(|w| sub_vec(w, &v[0]).iter().map(|x| x * int(2)).collect()).collect();
    let rhs: VecQ = v[1..].iter().map(|w| dot(w, w) - dot(&v[0], &v[0])).collect();
    solve_affine(&MatQ::from_rows(rows).unwrap(), &rhs).unwrap().unique().unwrap().clone()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let lat = build_anstar(3).unwrap();
    let mut verts: Vec<VecQ> = voronoi_vertices(&lat).unwrap().iter().map(|v| lat.to_euclidean(v).unwrap()).collect();
    verts.sort();
    let mut want = Vec::new();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                let mut v = vec![int(0); 3];
                v[p[0]] = int(s1);
                v[p[1]] = rat(s2, 2);
                want.push(v);
            }
        }
    }
    want.sort();
    let vertices_ok = verts == want;

    let (mu2, x) = covering_radius(&lat).unwrap();
    let mut simplices_ok = x.len() == 6 && mu2 == rat(5, 4);
    for s in &x {
        let pts: Vec<VecQ> = s.x.iter().map(|v| lat.to_euclidean(v).unwrap()).collect();
        let c = euclidean_circumcenter(&pts);
        let r2: Rat = sub_vec(&pts[0], &c).iter().map(|t| t * t).sum();
        let mut rows: Vec<VecQ> = (0..3).map(|i| pts.iter().map(|p| p[i].clone()).collect()).collect();
        rows.push(vec![int(1); 4]);
        let mut rhs = c.clone();
        rhs.push(int(1));
        let alpha = solve_affine(&MatQ::from_rows(rows).unwrap(), &rhs).unwrap().unique().unwrap().clone();
        simplices_ok &= c.iter().all(Zero::is_zero)
            && r2 == rat(5, 4)
            && alpha == vec![rat(1, 4); 4]
            && s.alpha == alpha
            && s.cr2 == r2;
    }
    let setup = CoverSetup::new(&lat).unwrap();
    let upsilon_ok = setup.upsilon == vec![rat(1, 2); 6];
    let weights_ok = setup
        .upsilon
        .iter()
        .zip(&setup.alpha)
        .all(|(u, a)| a.iter().all(|x| u * x == rat(1, 8)));
    let t = start.elapsed();
    outcome(
        vertices_ok && simplices_ok && upsilon_ok && weights_ok && within(t, Duration::from_secs(1)),
        format!(
            "24 vertices: {vertices_ok}, 6 simplices α=1/4 cr²=5/4: {simplices_ok}, υ=1/2: {upsilon_ok}, υα=1/8: {weights_ok}, {}",
            secs(t)
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let lat = build_anstar(3).unwrap();
    let (mu2, _) = covering_radius(&lat).unwrap();
    let covolume = lat.embedding.as_ref().unwrap().det().unwrap().abs();
    let pi = std::f64::consts::PI;
    let density = 4.0 / 3.0 * pi * to_f64(&mu2).powf(1.5) / to_f64(&covolume);
    let expected = 5.0 * 5f64.sqrt() * pi / 24.0;
    let err = (density - expected).abs();
    let t = start.elapsed();
    outcome(
        covolume == int(4) && mu2 == rat(5, 4) && err <= 1e-12 && within(t, Duration::from_secs(1)),
        format!("density {density:.15} vs 5√5π/24 = {expected:.15}, |Δ| = {err:.1e} (tol 1e-12), {}", secs(t)),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let certs = certify_cl(10_000);
    let c2_zero = certs[2].value.as_ref().map(Zero::is_zero) == Some(true);
    let others = certs.iter().filter(|c| c.l != 2).all(|c| match c.status {
        ClStatus::NonzeroExact => c.value.as_ref().is_some_and(|v| !v.is_zero()),
        ClStatus::NonzeroMod16 => c.l >= 6 && c.residue != 0,
        ClStatus::Zero => false,
    });
    let agree = certs.iter().filter(|c| c.l >= 6 && c.value.is_some()).all(|c| c.residue != 0);
    let rows = [
        weighted_residue_period8(0, 10_000) == Some([1, 0, 7, 0, 9, 0, 7, 0]),
        weighted_residue_period8(2, 10_000) == Some([4, 8, 12, 8, 4, 8, 12, 8]),
        weighted_residue_period8(4, 10_000) == Some([3, 12, 5, 4, 11, 12, 5, 4]),
    ];
    let t = start.elapsed();
    let ok = c2_zero && others && agree && rows.iter().all(|&r| r) && within(t, Duration::from_secs(30));
    outcome(
        ok,
        format!(
            "c_2 = 0: {c2_zero}, c_l ≠ 0 for l ≤ 10000, l ≠ 2: {others}, residue rows verbatim: {rows:?}, {}",
            secs(t)
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let lat = build_anstar(3).unwrap();
    let verts: Vec<VecQ> = voronoi_vertices(&lat).unwrap().iter().map(|v| lat.to_euclidean(v).unwrap()).collect();
    let spectrum = zonal_spectrum(&verts, 0, 20).unwrap();
    let odd = (1..=19).step_by(2).all(|l| spectrum.get(l).unwrap().is_zero());
    let even = (0..=20).step_by(2).all(|l| *spectrum.get(l).unwrap() == c_l_exact(l));
    let c4 = *spectrum.get(4).unwrap() == rat(7, 25);
    let t = start.elapsed();
    outcome(
        odd && even && c4 && within(t, Duration::from_secs(5)),
        format!("odd l ≤ 19 vanish: {odd}, even l ≤ 20 equal c_l: {even}, m_4 = 7/25: {c4}, {}", secs(t)),
    )
}

/// Random Euclidean symmetric `M` with Frobenius norm at most 1/10, as a lattice form.
fn random_form(rng: &mut ChaCha8Rng, e: &MatQ) -> SymMapQ {
    let mut m = MatQ::zeros(3, 3);
    for i in 0..3 {
        for j in i..3 {
            let v = rat(rng.gen_range(-1000..=1000), 20_000);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    let frob2: Rat = m.to_rows().iter().flatten().map(|x| x * x).sum();
    if frob2 > rat(1, 100) {
        let s = rat(1, 10) / Rat::from_float(to_f64(&frob2).sqrt()).unwrap() * rat(999, 1000);
        m = m.scale(&s);
    }
    SymMapQ::from_mat(&e.transpose().mul(&m).unwrap().mul(e).unwrap()).unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let lat = build_anstar(3).unwrap();
    let e = lat.embedding.clone().unwrap();
    let (_, x) = covering_radius(&lat).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sign_ok = true;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut degenerate = 0;
    for _ in 0..100 {
        let form = random_form(&mut rng, &e);
        let half = form.scale(&rat(1, 2));
        for s in &x {
            let full = cr_after_form(&form, s, &lat.gram).unwrap();
            sign_ok &= &full.cr2 / &s.cr2 - first_order_cr(&form, s) >= Rat::zero();
            let halved = cr_after_form(&half, s, &lat.gram).unwrap().error;
            if halved.is_zero() {
                degenerate += 1;
                sign_ok &= full.error.is_zero();
                continue;
            }
            let ratio = to_f64(&(&full.error / &halved));
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    let t = start.elapsed();
    let ratio_ok = lo >= 3.5 && hi <= 4.5;
    outcome(
        sign_ok && ratio_ok && within(t, Duration::from_secs(10)),
        format!(
            "600 simplex checks, error ≥ 0: {sign_ok}, halving ratio in [{lo:.4}, {hi:.4}] (tol [3.5, 4.5]), {degenerate} isotropic, {}",
            secs(t)
        ),
    )
}

fn random_body(rng: &mut ChaCha8Rng) -> RadialBody {
    let count = rng.gen_range(1..=4);
    let terms: Vec<HarmonicTerm> = (0..count)
        .map(|_| {
            let degree = [4u32, 6, 8][rng.gen_range(0..3)];
            HarmonicTerm {
                degree,
                order: rng.gen_range(-(degree as i32)..=degree as i32),
                coefficient: rng.gen_range(-1.0..1.0),
            }
        })
        .collect();
    let raw = RadialBody::from_terms(&terms).unwrap();
    let amplitude = rng.gen_range(0.001..=0.02);
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

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let setup = CoverSetup::new(&build_anstar(3).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut passed = 0;
    let mut worst_eps_prime = 0.0f64;
    for _ in 0..20 {
        let body = random_body(&mut rng);
        assert!(body.is_normalized() && body.eps() <= 0.02 + 1e-15);
        if let Ok(c) = build_cover(&body, &setup) {
            if c.all_inside() && c.meets_theorem_bound() {
                passed += 1;
            }
            worst_eps_prime = worst_eps_prime.max(to_f64(&c.eps_prime));
        }
    }
    let zero = build_cover(&RadialBody::ball(), &setup).unwrap();
    let zero_ok = zero.det_ratio == int(1);
    let t = start.elapsed();
    outcome(
        passed == 20 && zero_ok && within(t, Duration::from_secs(60)),
        format!("{passed}/20 bodies cover with det_ratio ≥ bound (max ε′ = {worst_eps_prime:.3e}), ρ = 0 gives det_ratio = 1: {zero_ok}, {}", secs(t)),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let setup = CoverSetup::new(&build_anstar(3).unwrap()).unwrap();
    let mut margins = Vec::new();
    let mut below = true;
    for a in [0.02, 0.01, 0.005] {
        let body = RadialBody::zonal_degree4(a);
        let scan = rotation_scan(&body, &setup, DEFAULT_GRID).unwrap();
        let margin = -scan.delta_k_bound();
        below &= margin > 0.0;
        margins.push((a, margin / a));
    }
    let ratios: Vec<f64> = margins.iter().map(|m| m.1).collect();
    let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let t = start.elapsed();
    let linear = spread <= 1.25;
    outcome(
        below && linear && within(t, Duration::from_secs(300)),
        format!(
            "density below ball at all amplitudes: {below}, margin/a = {} (max/min {spread:.3}, tol 1.25), grid {DEFAULT_GRID}, {}",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", "),
            secs(t)
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let lat = build_anstar(3).unwrap();
    let eps = rat(1, 100);
    let mut notes = Vec::new();
    let mut ok = ball_class_certificate(3).map(|c| c.classification == Classification::CriticallySemiEutactic).unwrap_or(false);
    for pair in 0..3 {
        match extension_witness(&lat, pair, &eps) {
            Ok(w) => {
                let good = w.det_t > one()
                    && w.kept_cr2.iter().all(|(_, c)| *c < w.mu2)
                    && w.members.iter().all(|&m| m)
                    && w.verify(&lat).is_ok();
                ok &= good;
                notes.push(format!("pair {pair}: s = {}, det T = {:.6}, τ = {}, ok = {good}", w.s, to_f64(&w.det_t), w.tau));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("pair {pair}: {e}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(ok && within(t, Duration::from_secs(30)), format!("{}, {}", notes.join("; "), secs(t)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("eutaxy classification n = 2..5", criterion_1),
        ("A_3* geometry", criterion_2),
        ("ball covering density in 3D", criterion_3),
        ("c_l certificates to l = 10000", criterion_4),
        ("zonal spectrum", criterion_5),
        ("circumradius linearization", criterion_6),
        ("constructive cover engine", criterion_7),
        ("worst-covering demo", criterion_8),
        ("inextensibility witnesses", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("[{}] criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {}/9 passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
