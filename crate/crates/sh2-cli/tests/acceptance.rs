//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured extremes (visible with `--nocapture`). Oracles are
//! independent of the implementation paths they check: complete integrals
//! are compared against adaptive quadrature of their defining integrands,
//! and closed-form trajectory anchors against the integrated flow.

use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sh2::elliptic::{
    complete_e, complete_k, incomplete_e, jacobi_sn_cn_dn, EllipticArgument, Modulus,
};
use sh2::extremal::{
    classify, integrate_extremal, integrate_pendulum, Covector, PendulumState, StepControl, Stratum,
};
use sh2::frame::{contact_form_eval, contact_nondegeneracy, eval_frame, lie_rank, TangentVector};
use sh2::group::{GroupElement, HyperbolicRotation};
use sh2::maxwell::{
    find_k0, find_roots, first_maxwell_time, g_function, g_scan, numeric_maxwell_search, FirstTime,
    K0Report,
};
use sh2::symmetry::{
    bracket_table, flow_v1, frame_bracket_table, horizontal_residual, is_fixed_point, map_geodesic,
    verify_symmetry, SampleSpec, SymmetryField,
};

/// Adaptive Simpson quadrature; the oracle for the defining integrals.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let flm = f(0.5 * (a + m));
        let frm = f(0.5 * (m + b));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

fn modulus(k: f64) -> Modulus {
    Modulus::new(k).unwrap()
}

fn arg(u: f64, k: f64) -> EllipticArgument {
    EllipticArgument::new(u, modulus(k)).unwrap()
}

#[test]
fn criterion_1_elliptic_kernel() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);

    // Pythagorean identities at 1e4 random (u, k), abs tol 1e-12.
    let mut worst_identity: f64 = 0.0;
    for _ in 0..10_000 {
        let u = rng.gen_range(-20.0..20.0);
        let k = rng.gen_range(0.0..0.995);
        let (sn, cn, dn) = jacobi_sn_cn_dn(arg(u, k)).unwrap();
        let e1 = (sn * sn + cn * cn - 1.0).abs();
        let e2 = (dn * dn + k * k * sn * sn - 1.0).abs();
        worst_identity = worst_identity.max(e1).max(e2);
    }
    assert!(worst_identity < 1e-12, "identity residual {worst_identity}");

    // Legendre relation, rel tol 1e-10.
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut worst_legendre: f64 = 0.0;
    for i in 1..=9 {
        let k = modulus(i as f64 / 10.0);
        let kc = modulus(k.complement());
        let lhs = complete_e(k).unwrap() * complete_k(kc).unwrap()
            + complete_e(kc).unwrap() * complete_k(k).unwrap()
            - complete_k(k).unwrap() * complete_k(kc).unwrap();
        worst_legendre = worst_legendre.max(((lhs - half_pi) / half_pi).abs());
    }
    assert!(worst_legendre < 1e-10, "Legendre residual {worst_legendre}");

    // 4K-periodicity of sn at random points, abs tol 1e-10.
    let mut worst_period: f64 = 0.0;
    for _ in 0..1_000 {
        let u = rng.gen_range(-10.0..10.0);
        let k = rng.gen_range(0.0..0.99);
        let quarter = complete_k(modulus(k)).unwrap();
        let (sn0, ..) = jacobi_sn_cn_dn(arg(u, k)).unwrap();
        let (sn1, ..) = jacobi_sn_cn_dn(arg(u + 4.0 * quarter, k)).unwrap();
        worst_period = worst_period.max((sn0 - sn1).abs());
    }
    assert!(worst_period < 1e-10, "periodicity residual {worst_period}");

    // K and E against quadrature of the defining integrals, rel 1e-10,
    // k in [0, 0.99].
    let mut worst_quad: f64 = 0.0;
    for i in 0..=33 {
        let k = 0.03 * i as f64;
        let k = if k > 0.99 { 0.99 } else { k };
        let got_k = complete_k(modulus(k)).unwrap();
        let want_k = adaptive_simpson(
            &|t: f64| 1.0 / (1.0 - k * k * t.sin() * t.sin()).sqrt(),
            0.0,
            half_pi,
            1e-14,
        );
        let got_e = complete_e(modulus(k)).unwrap();
        let want_e = adaptive_simpson(
            &|t: f64| (1.0 - k * k * t.sin() * t.sin()).sqrt(),
            0.0,
            half_pi,
            1e-14,
        );
        worst_quad = worst_quad
            .max(((got_k - want_k) / want_k).abs())
            .max(((got_e - want_e) / want_e).abs());
    }
    assert!(worst_quad < 1e-10, "quadrature residual {worst_quad}");

    // d/du of the incomplete second integral is dn^2, rel tol 1e-6.
    let mut worst_deriv: f64 = 0.0;
    let h = 1e-6;
    for _ in 0..200 {
        let u = rng.gen_range(-5.0..5.0);
        let k = rng.gen_range(0.05..0.95);
        let fd = (incomplete_e(arg(u + h, k)).unwrap() - incomplete_e(arg(u - h, k)).unwrap())
            / (2.0 * h);
        let (_, _, dn) = jacobi_sn_cn_dn(arg(u, k)).unwrap();
        worst_deriv = worst_deriv.max(((fd - dn * dn) / (dn * dn)).abs());
    }
    assert!(worst_deriv < 1e-6, "derivative residual {worst_deriv}");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "elliptic kernel took {elapsed:.2} s");
    println!(
        "acceptance criterion 1 (elliptic kernel): PASS — identities {worst_identity:.2e}, \
         Legendre {worst_legendre:.2e}, periodicity {worst_period:.2e}, quadrature {worst_quad:.2e}, \
         {elapsed:.2} s"
    );
}

#[test]
fn criterion_2_group_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    // Roundoff of the composition scales with cosh of the accumulated
    // boost, so angles are drawn from [-3, 3] to keep the 1e-10 absolute
    // tolerance meaningful.
    let sample = |rng: &mut ChaCha8Rng| {
        GroupElement::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-3.0..3.0),
        )
    };
    let mut worst_axiom: f64 = 0.0;
    let mut worst_rotation: f64 = 0.0;
    let dist = |a: GroupElement, b: GroupElement| -> f64 {
        (a.x - b.x)
            .abs()
            .max((a.y - b.y).abs())
            .max((a.z - b.z).abs())
    };
    for _ in 0..10_000 {
        let m1 = sample(&mut rng);
        let m2 = sample(&mut rng);
        let m3 = sample(&mut rng);
        worst_axiom = worst_axiom
            .max(dist(m1.compose(m2).compose(m3), m1.compose(m2.compose(m3))))
            .max(dist(m1.compose(GroupElement::IDENTITY), m1))
            .max(dist(GroupElement::IDENTITY.compose(m1), m1))
            .max(dist(m1.compose(m1.inverse()), GroupElement::IDENTITY))
            .max(dist(m1.inverse().compose(m1), GroupElement::IDENTITY));

        let s = rng.gen_range(-2.0..2.0);
        let via_rotation = HyperbolicRotation::new(s).apply(m1);
        let via_compose = GroupElement::new(0.0, 0.0, -s).compose(m1);
        worst_rotation = worst_rotation.max(dist(via_rotation, via_compose));
    }
    assert!(worst_axiom < 1e-10, "group axiom residual {worst_axiom}");
    assert!(
        worst_rotation < 1e-12,
        "rotation/composition residual {worst_rotation}"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "group suite took {elapsed:.2} s");
    println!(
        "acceptance criterion 2 (group suite): PASS — axioms {worst_axiom:.2e}, \
         rotation {worst_rotation:.2e}, {elapsed:.2} s"
    );
}

#[test]
fn criterion_3_frame_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    // Bracket table in finite-difference mode, tol 1e-6.
    let mut worst_bracket: f64 = 0.0;
    for r in frame_bracket_table() {
        worst_bracket = worst_bracket.max(r.max_residual);
    }
    assert!(worst_bracket < 1e-6, "bracket residual {worst_bracket}");

    // Full rank at 1e3 random points.
    for _ in 0..1_000 {
        let q = GroupElement::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        );
        assert_eq!(lie_rank(q), 3, "rank deficit at {q:?}");
    }

    // The contact form annihilates the distribution, abs tol 1e-12
    // (roundoff scales with cosh^2 z, so the box keeps |z| <= 3).
    let mut worst_kernel: f64 = 0.0;
    for _ in 0..1_000 {
        let q = GroupElement::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-3.0..3.0),
        );
        let (x1, x2, _) = eval_frame(q);
        let a = rng.gen_range(-2.0..2.0);
        let b = rng.gen_range(-2.0..2.0);
        let v = TangentVector::new(
            q,
            [
                a * x1.components[0] + b * x2.components[0],
                a * x1.components[1] + b * x2.components[1],
                a * x1.components[2] + b * x2.components[2],
            ],
        );
        worst_kernel = worst_kernel.max(contact_form_eval(q, &v).abs());
    }
    assert!(worst_kernel < 1e-12, "kernel residual {worst_kernel}");

    // Contact nondegeneracy bounded away from zero at 100 random points.
    let mut least_wedge = f64::INFINITY;
    for _ in 0..100 {
        let q = GroupElement::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-3.0..3.0),
        );
        least_wedge = least_wedge.min(contact_nondegeneracy(q).abs());
    }
    assert!(least_wedge > 0.5, "wedge coefficient {least_wedge}");

    println!(
        "acceptance criterion 3 (frame suite): PASS — brackets {worst_bracket:.2e}, \
         rank 3 at 1000 points, kernel {worst_kernel:.2e}, wedge >= {least_wedge:.3}"
    );
}

#[test]
fn criterion_4_extremal_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let ctrl = StepControl::default();

    // Hamiltonian and cylinder conservation along 100 random extremals to
    // t = 50, drift < 1e-9.
    let mut worst_h: f64 = 0.0;
    let mut worst_cyl: f64 = 0.0;
    for _ in 0..100 {
        let h0 = Covector::from_angle(
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(-1.5..1.5),
        );
        let traj = integrate_extremal(&h0, 50.0, &ctrl).unwrap();
        for s in &traj.samples {
            worst_h = worst_h.max((s.state.hamiltonian() - 0.5).abs());
            worst_cyl = worst_cyl.max(s.state.h.cylinder_defect());
        }
    }
    assert!(worst_h < 1e-9, "Hamiltonian drift {worst_h}");
    assert!(worst_cyl < 1e-9, "cylinder drift {worst_cyl}");

    // Pendulum energy conservation to t = 100, drift < 1e-9.
    let mut worst_pendulum: f64 = 0.0;
    for _ in 0..20 {
        let p0 = PendulumState::new(
            rng.gen_range(0.0..4.0 * std::f64::consts::PI),
            rng.gen_range(-2.5..2.5),
        );
        let e0 = p0.energy();
        for (_, p) in integrate_pendulum(&p0, 100.0, &ctrl).unwrap() {
            worst_pendulum = worst_pendulum.max((p.energy() - e0).abs());
        }
    }
    assert!(worst_pendulum < 1e-9, "pendulum drift {worst_pendulum}");

    // Closed-form anchors: stable equilibria give straight lines, unstable
    // equilibria stay on the z axis, each to 1e-9.
    let mut worst_closed: f64 = 0.0;
    for sign in [1.0, -1.0] {
        let traj = integrate_extremal(&Covector::new(sign, 0.0, 0.0), 5.0, &ctrl).unwrap();
        for s in &traj.samples {
            worst_closed = worst_closed
                .max((s.state.q.x - sign * s.t).abs())
                .max(s.state.q.y.abs())
                .max(s.state.q.z.abs());
        }
        let traj = integrate_extremal(&Covector::new(0.0, sign, 0.0), 5.0, &ctrl).unwrap();
        for s in &traj.samples {
            worst_closed = worst_closed
                .max(s.state.q.x.abs())
                .max(s.state.q.y.abs())
                .max((s.state.q.z - sign * s.t).abs());
        }
    }
    assert!(worst_closed < 1e-9, "closed-form residual {worst_closed}");

    println!(
        "acceptance criterion 4 (extremal suite): PASS — H drift {worst_h:.2e}, \
         cylinder {worst_cyl:.2e}, pendulum {worst_pendulum:.2e}, closed forms {worst_closed:.2e}"
    );
}

#[test]
fn criterion_5_symmetry_suite() {
    // Residuals below 1e-6 for the generators in finite-difference mode.
    let spec = SampleSpec {
        force_finite_differences: true,
        ..SampleSpec::default()
    };
    let mut worst_generator: f64 = 0.0;
    for v in [SymmetryField::V1, SymmetryField::V2, SymmetryField::V3] {
        let r = verify_symmetry(&v, &spec);
        assert!(r.pass, "{r:?}");
        worst_generator = worst_generator
            .max(r.residual_contact)
            .max(r.residual_metric);
    }
    assert!(worst_generator < 1e-6);

    // The perturbed counterexample fails with residual > 1e-3.
    let perturbed = SymmetryField::Custom {
        name: "v1+0.01*x*dx".into(),
        field: sh2::frame::CoordinateVectorField::new(|q| [-q.y + 0.01 * q.x, -q.x, -1.0]),
    };
    let r = verify_symmetry(&perturbed, &spec);
    assert!(!r.pass && r.residual_metric > 1e-3, "{r:?}");
    let counterexample_residual = r.residual_metric;

    // Flow/generator consistency by Richardson extrapolation, tol 1e-8.
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst_generator_fd: f64 = 0.0;
    for _ in 0..50 {
        let q = GroupElement::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        );
        let v1 = SymmetryField::V1.field().eval(q);
        let fd = |h: f64| {
            let p = flow_v1(q, h);
            let m = flow_v1(q, -h);
            [
                (p.x - m.x) / (2.0 * h),
                (p.y - m.y) / (2.0 * h),
                (p.z - m.z) / (2.0 * h),
            ]
        };
        let d1 = fd(1e-4);
        let d2 = fd(5e-5);
        for i in 0..3 {
            let extrapolated = (4.0 * d2[i] - d1[i]) / 3.0;
            worst_generator_fd = worst_generator_fd.max((extrapolated - v1[i]).abs());
        }
    }
    assert!(
        worst_generator_fd < 1e-8,
        "flow/generator {worst_generator_fd}"
    );

    // Bracket table to 1e-6.
    let mut worst_bracket: f64 = 0.0;
    let table = bracket_table();
    assert_eq!(
        table.iter().map(|r| r.equals.as_str()).collect::<Vec<_>>(),
        vec!["v3", "v2", "0"]
    );
    for r in &table {
        worst_bracket = worst_bracket.max(r.max_residual);
    }
    assert!(worst_bracket < 1e-6, "bracket residual {worst_bracket}");

    // Mapped-geodesic admissibility residual < 1e-6 for a generic source.
    let h0 = Covector::from_angle(0.5, 0.25);
    let traj = integrate_extremal(&h0, 5.0, &StepControl::default()).unwrap();
    let image = map_geodesic(&traj, 0.5);
    let res = horizontal_residual(&image);
    assert!(res.samples > 100);
    assert!(res.max_ode < 1e-6 && res.max_contact < 1e-6, "{res:?}");

    println!(
        "acceptance criterion 5 (symmetry suite): PASS — generators {worst_generator:.2e}, \
         counterexample {counterexample_residual:.2e} > 1e-3, flow {worst_generator_fd:.2e}, \
         brackets {worst_bracket:.2e}, admissibility {:.2e}",
        res.max_ode.max(res.max_contact)
    );
}

#[test]
fn criterion_6_maxwell_suite() {
    let start = Instant::now();

    // g(0) = 0 within 1e-12.
    let g0 = g_function(modulus(0.0)).unwrap();
    assert!(g0.abs() < 1e-12, "g(0) = {g0}");

    // g' vs k K(k), rel 1e-5 on [0.05, 0.95] (the scan's derivative column).
    let scan = g_scan(0.05, 0.95, 91).unwrap();
    let mut worst_deriv: f64 = 0.0;
    for r in &scan.rows {
        worst_deriv = worst_deriv.max(((r.g_prime_fd - r.k_times_big_k) / r.k_times_big_k).abs());
    }
    assert!(worst_deriv < 1e-5, "derivative identity {worst_deriv}");

    // Lattice identity of the secular factor, rel 1e-9 at random (psi, k).
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst_lattice: f64 = 0.0;
    for _ in 0..50 {
        let psi = rng.gen_range(-2.0..2.0);
        let k = modulus(rng.gen_range(0.2..0.9));
        let quarter = complete_k(k).unwrap();
        let g = g_function(k).unwrap();
        for n in 1..=3 {
            let f = sh2::maxwell::l1_l2_c2(psi, psi + 4.0 * n as f64 * quarter, k, 1.0).unwrap();
            let want = 4.0 * n as f64 * g;
            worst_lattice = worst_lattice.max(((f.secular_factor - want) / want).abs());
        }
    }
    assert!(worst_lattice < 1e-9, "lattice identity {worst_lattice}");

    // Numeric search: no axis intersection for 50 random oscillatory
    // covectors up to t = 50 at tol 1e-6.
    let mut checked = 0;
    while checked < 50 {
        let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
        let h3 = rng.gen_range(-0.7..0.7);
        let h0 = Covector::from_angle(alpha, h3);
        if classify(&h0, 1e-3)
            .map(|s| s != Stratum::C1)
            .unwrap_or(true)
        {
            continue;
        }
        let v = numeric_maxwell_search(&h0, 50.0, 0.1, 1e-6).unwrap();
        assert!(
            v.maxwell_points.is_empty(),
            "unexpected intersection for {h0:?}: {:?}",
            v.maxwell_points
        );
        assert_eq!(v.first_time, FirstTime::Infinity);
        checked += 1;
    }

    // Continuous intersection for the unstable equilibria.
    for sign in [1.0, -1.0] {
        let v = numeric_maxwell_search(&Covector::new(0.0, sign, 0.0), 50.0, 0.1, 1e-6).unwrap();
        assert!(v.diagnostics.continuous_intersection, "sign {sign}");
        assert!(!v.maxwell_points.is_empty());
        for p in &v.maxwell_points {
            assert!(is_fixed_point(p.q, 1e-6) && p.t >= 0.1);
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "maxwell suite took {elapsed:.2} s");
    println!(
        "acceptance criterion 6 (maxwell suite): PASS — g(0) {g0:.2e}, g' {worst_deriv:.2e}, \
         lattice {worst_lattice:.2e}, 50 oscillatory covectors clean, axis strata continuous, \
         {elapsed:.2} s"
    );
}

#[test]
fn criterion_7_known_discrepancy_handled() {
    // The printed g has no interior root; the search must say so, not guess.
    let report = find_k0(1e-12).unwrap();
    match &report {
        K0Report::NoInteriorRoot {
            boundary_root_at_zero,
            grid_min_g,
            ..
        } => {
            assert!(*boundary_root_at_zero);
            assert!(*grid_min_g > 0.0);
        }
        K0Report::InteriorRoot { roots } => panic!("unexpected interior roots {roots:?}"),
    }

    // Root-finder self-tests on injected functions.
    let roots = find_roots(&|k| Ok(k - 0.5), 0.0, 1.0, 256, 1e-12).unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0] - 0.5).abs() < 1e-10);
    let roots = find_roots(&|k| Ok((k - 0.3) * (k - 0.7)), 0.0, 1.0, 256, 1e-12).unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] - 0.3).abs() < 1e-10 && (roots[1] - 0.7).abs() < 1e-10);

    // 4 k K(k) for a supplied modulus, cross-checked against complete_k.
    let h0 = Covector::new(0.6, 0.8, 1.0);
    let v = first_maxwell_time(&h0, Some(modulus(0.9))).unwrap();
    let want = 4.0 * 0.9 * complete_k(modulus(0.9)).unwrap();
    match v.first_time {
        FirstTime::Time(t) => {
            assert!((t - want).abs() < 1e-12);
            assert!((t - 8.209976898321973).abs() < 1e-10);
        }
        other => panic!("expected a time, got {other:?}"),
    }

    // Without a supplied modulus the verdict carries the diagnostic.
    let v = first_maxwell_time(&h0, None).unwrap();
    assert_eq!(v.first_time, FirstTime::Undetermined);
    assert!(matches!(
        v.diagnostics.k0,
        Some(K0Report::NoInteriorRoot { .. })
    ));

    println!(
        "acceptance criterion 7 (known discrepancy): PASS — no-interior-root diagnostic, \
         root-finder self-tests, 4kK(k) = {want:.12}"
    );
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sh2"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_8_cli_determinism_and_contract() {
    // Byte determinism for fixed config and seed.
    for args in [
        vec!["integrate", "--pendulum", "1.0,0.5", "--tmax", "3"],
        vec![
            "integrate",
            "--h",
            "0.6,0.8,1",
            "--tmax",
            "2",
            "--format",
            "json",
        ],
        vec!["gscan", "--n", "50"],
        vec!["maxwell", "--h", "1,0,0", "--tmax", "5"],
        vec!["verify", "--seed", "11"],
        vec!["classify", "--pendulum", "2.0,1.0"],
        vec!["brackets"],
    ] {
        let a = run_cli(&args);
        let b = run_cli(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }

    // Exit-code contract: 0 success, 2 input/domain error.
    assert_eq!(
        run_cli(&["classify", "--h", "1,0,0"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run_cli(&["classify", "--h", "0.5,0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run_cli(&["gscan", "--kmin", "0.5", "--kmax", "0.4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_cli(&["integrate", "--h", "1,0,0", "--tmax", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run_cli(&["verify", "--field", "x"]).status.code(), Some(2));

    // integrate --symmetry columns satisfy the flow map row-wise to 1e-12.
    let s: f64 = 1.3;
    let out = run_cli(&[
        "integrate",
        "--pendulum",
        "1.0,0.5",
        "--tmax",
        "2",
        "--symmetry",
        "1.3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut worst_row: f64 = 0.0;
    for line in text.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let image = flow_v1(GroupElement::new(c[1], c[2], c[3]), s);
        worst_row = worst_row
            .max((c[7] - image.x).abs())
            .max((c[8] - image.y).abs())
            .max((c[9] - image.z).abs());
    }
    assert!(worst_row < 1e-12, "symmetry column residual {worst_row}");

    println!(
        "acceptance criterion 8 (CLI determinism): PASS — byte-identical reruns, \
         exit codes honored, symmetry columns {worst_row:.2e}"
    );
}
