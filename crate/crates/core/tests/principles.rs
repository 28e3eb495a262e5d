use fracrobin::catalog::{parse_list, Scenario, SpaceProfile, TimeProfile};
use fracrobin::frac_calculus::{caputo_left, TimeSeries};
use fracrobin::mesh::Domain;
use fracrobin::principles::{
    extremum_caputo_check, grading_stability, hopf_auxiliary, hopf_normal_check, mu_star_scan, strong_positivity_check,
    suite, weak_max_check, write_verdict_csv, Extremum, HalfBallRegion, HopfError, NonuniformCaputo, Status,
    MU_SCAN_CAP,
};
use fracrobin::robin_spectrum::eigen_interval;
use fracrobin::spectral_solver::{solve, SolutionField};
use fracrobin::{FracOrder, ProblemSpec, RobinCoefficient};

fn sp(s: &str) -> Vec<SpaceProfile> {
    parse_list(s).unwrap()
}
fn tp(s: &str) -> Vec<TimeProfile> {
    parse_list(s).unwrap()
}
fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn run(sc: &Scenario, modes: usize, steps: usize) -> (ProblemSpec, SolutionField) {
    let lam = &sc.lambda;
    let (l, r) = (lam.constant(fracrobin::Face::Left).unwrap(), lam.constant(fracrobin::Face::Right).unwrap());
    let basis = eigen_interval(l, r, &sc.domain, modes).unwrap();
    let spec = sc.build(Some(&basis)).unwrap();
    let field = solve(&spec, &basis, steps).unwrap();
    (spec, field)
}

fn unit(alpha: f64, lam: f64) -> Scenario {
    Scenario::new(alpha, 1.0, Domain::interval(1.0, 65).unwrap(), RobinCoefficient::uniform(lam))
}

#[test]
fn weak_max_holds_on_random_nonnegative_suite() {
    let dom = Domain::interval(1.0, 65).unwrap();
    let lam = RobinCoefficient::interval(1.0, 2.0);
    let basis = eigen_interval(1.0, 2.0, &dom, 32).unwrap();
    let cases = suite::random_nonnegative(11, 50, &dom, &lam, &basis);
    assert_eq!(cases.len(), 50);
    for sc in &cases {
        let spec = sc.build(Some(&basis)).unwrap();
        let field = solve(&spec, &basis, 128).unwrap();
        let v = weak_max_check(&field, &spec, 1e-8 * field.max_abs().max(1.0));
        assert_eq!(v.status, Status::Pass, "{v:?}");
    }
}

#[test]
fn suites_are_seeded() {
    let dom = Domain::interval(1.0, 33).unwrap();
    let lam = RobinCoefficient::interval(1.0, 2.0);
    let basis = eigen_interval(1.0, 2.0, &dom, 4).unwrap();
    let a = suite::random_nonnegative(3, 5, &dom, &lam, &basis);
    assert_eq!(a, suite::random_nonnegative(3, 5, &dom, &lam, &basis));
    assert_ne!(a, suite::random_nonnegative(4, 5, &dom, &lam, &basis));
}

#[test]
fn negative_data_make_weak_check_inapplicable() {
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("bump:0.5,0.2,-1");
    let (spec, field) = run(&sc, 32, 32);
    let v = weak_max_check(&field, &spec, 1e-8);
    assert_eq!(v.status, Status::Inapplicable);
    let w = v.witness.unwrap();
    assert_eq!(w.t, 0.0);
    assert!(w.value < 0.0 && (w.x[0] - 0.5).abs() < 0.2);
}

#[test]
fn zero_data_pass_weak_check() {
    let (spec, field) = run(&unit(0.5, 1.0), 8, 16);
    let v = weak_max_check(&field, &spec, 0.0);
    assert_eq!(v.status, Status::Pass);
    assert_eq!(v.margin, 0.0);
}

#[test]
fn strong_positivity_for_unit_initial_value() {
    // u0 ≡ 1 with b = 0 violates compatibility; the waiver admits it
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("const:1");
    assert!(sc.build(None).unwrap().validate().is_err());
    sc.enforce_compatibility = false;
    let (spec, field) = run(&sc, 64, 64);
    let v = strong_positivity_check(&field, &spec, 1e-12);
    assert_eq!(v.status, Status::Pass, "{v:?}");
    assert!(v.margin > 0.0);

    // b = λ keeps u ≡ 1 stationary and compatible
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("const:1");
    sc.b.left = sp("const:1");
    sc.b.right = sp("const:1");
    sc.b.time = tp("const:1");
    let (spec, field) = run(&sc, 32, 32);
    let v = strong_positivity_check(&field, &spec, 1e-12);
    assert_eq!(v.status, Status::Pass);
    assert!((v.witness.unwrap().value - 1.0).abs() < 1e-10);
}

#[test]
fn strong_positivity_needs_positive_start_and_threshold() {
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("bump:0.5,0.2,1");
    let (spec, field) = run(&sc, 32, 32);
    assert_eq!(strong_positivity_check(&field, &spec, 1e-12).status, Status::Inapplicable);
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("mode:1");
    let (spec, field) = run(&sc, 8, 16);
    assert_eq!(strong_positivity_check(&field, &spec, 0.0).status, Status::Inapplicable);
}

#[test]
fn strong_positive_suite_passes_and_hopf_min_agrees() {
    let dom = Domain::interval(1.0, 65).unwrap();
    let lam = RobinCoefficient::interval(1.0, 2.0);
    let basis = eigen_interval(1.0, 2.0, &dom, 32).unwrap();
    let mut strict = 0;
    for sc in suite::strong_positive(5, 10, &dom, &lam, &basis) {
        let spec = sc.build(Some(&basis)).unwrap();
        let field = solve(&spec, &basis, 64).unwrap();
        let s = field.max_abs().max(1.0);
        let v = strong_positivity_check(&field, &spec, 1e-12 * s);
        assert_eq!(v.status, Status::Pass, "{v:?}");
        // whenever the boundary minimum is strict, the Hopf minimum branch holds
        let h = hopf_normal_check(&field, 1e-8 * s, Extremum::Min);
        if h.status != Status::Inapplicable {
            strict += 1;
            assert_eq!(h.status, Status::Pass, "{h:?}");
        }
    }
    assert!(strict > 0);
}

#[test]
fn boundary_forced_maximum_has_positive_normal_derivative() {
    let mut sc = unit(0.6, 1.0);
    sc.b.right = sp("const:3");
    sc.b.time = tp("smoothstep:0.3");
    let (_, field) = run(&sc, 64, 64);
    let v = hopf_normal_check(&field, 1e-8, Extremum::Max);
    assert_eq!(v.status, Status::Pass, "{v:?}");
    let w = v.witness.unwrap();
    assert_eq!(w.x[0], 1.0);
    assert!(w.t > 0.0 && w.value > 0.0);
}

#[test]
fn interior_maximum_is_inapplicable() {
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("bump:0.5,0.3,1");
    let (_, field) = run(&sc, 64, 32);
    let v = hopf_normal_check(&field, 1e-8, Extremum::Max);
    assert_eq!(v.status, Status::Inapplicable);
}

#[test]
fn decaying_mode_has_boundary_minimum_with_negative_derivative() {
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("mode:1");
    let (_, field) = run(&sc, 8, 32);
    let v = hopf_normal_check(&field, 1e-8, Extremum::Min);
    assert_eq!(v.status, Status::Pass, "{v:?}");
    assert!(v.witness.unwrap().value < 0.0);
}

#[test]
fn caputo_at_the_minimum_is_nonpositive() {
    let mut sc = unit(0.7, 1.0);
    sc.u0 = sp("mode:1");
    let (_, field) = run(&sc, 8, 64);
    let v = extremum_caputo_check(&field, order(0.7), 1e-6);
    assert_eq!(v.status, Status::Pass);
    assert!(v.witness.unwrap().value < 0.0);

    // constant field: the derivative vanishes
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("const:1");
    sc.b.left = sp("const:1");
    sc.b.right = sp("const:1");
    sc.b.time = tp("const:1");
    let (_, field) = run(&sc, 8, 16);
    let v = extremum_caputo_check(&field, order(0.5), 1e-6);
    assert!(v.status != Status::Fail);

    // minimum at t = 0
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("bump:0.5,0.3,-1");
    let (_, field) = run(&sc, 32, 16);
    assert_eq!(extremum_caputo_check(&field, order(0.5), 1e-6).status, Status::Inapplicable);
}

#[test]
fn verdict_csv_layout() {
    let mut sc = unit(0.5, 1.0);
    sc.u0 = sp("mode:1");
    let (spec, field) = run(&sc, 8, 16);
    let vs = vec![
        weak_max_check(&field, &spec, 1e-8),
        strong_positivity_check(&field, &spec, 0.0),
    ];
    let mut buf = Vec::new();
    write_verdict_csv(&vs, 1, &["seed=1".to_string()], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# fracrobin-verdict v1");
    assert_eq!(lines[1], "# seed=1");
    assert_eq!(lines[2], "check,pass,witness_t,witness_x,value,margin,tol");
    assert!(lines[3].starts_with("weak_max,true,"));
    assert_eq!(lines[3].split(',').count(), 7);
    assert!(lines[4].starts_with("strong_positivity,inapplicable,,,,"));
    assert_eq!(lines[4].split(',').count(), 7);
}

// ------------------------------------------------------------ Hopf auxiliary

#[test]
fn auxiliary_vanishes_on_sphere_and_is_positive_inside() {
    for d in [1, 2] {
        let a = order(0.6);
        let region = HalfBallRegion::new(d, 0.01, a);
        let aux = hopf_auxiliary(&region, 20000.0, a).unwrap();
        let r2 = region.radius * region.radius;
        let mut on_sphere = 0;
        for s in &aux.samples {
            let rho2 = s.x[0] * s.x[0] + s.x[1] * s.x[1] + (s.t - region.t0).powi(2);
            if (rho2 - r2).abs() < 1e-12 * r2 {
                on_sphere += 1;
                assert!(s.h.abs() < 1e-12, "{s:?}");
            } else {
                assert!(s.h > 0.0, "{s:?}");
            }
            assert!(s.x[0] >= region.separation() * (1.0 - 1e-12));
        }
        assert!(on_sphere > 0);
        let x0 = aux
            .samples
            .iter()
            .find(|s| s.x == [region.radius, 0.0] && s.t == region.t0)
            .expect("x0 sampled");
        assert_eq!(x0.h, 0.0);
    }
}

#[test]
fn doubling_scan_finds_a_negative_window() {
    for d in [1, 2] {
        for alpha in [0.3, 0.7] {
            let a = order(alpha);
            let region = HalfBallRegion::new(d, 0.01, a);
            let scan = mu_star_scan(&region, a).unwrap();
            let mu = scan.mu_star.expect("μ* found");
            assert!(mu <= MU_SCAN_CAP);
            for k in 0..3 {
                let m = mu * f64::from(1 << k);
                let row = scan.table.iter().find(|r| r.0 == m).unwrap();
                assert!(row.1 < 0.0);
                assert!(grading_stability(&region, m, a).unwrap() < 0.05);
            }
        }
    }
}

#[test]
fn sign_reverses_for_very_large_mu() {
    // the Caputo memory of e^{−μ(R² − (t−t0)²)} grows like e^{μr²} and
    // eventually dominates the Laplacian term
    let a = order(0.5);
    let region = HalfBallRegion::new(1, 0.01, a);
    let scan = mu_star_scan(&region, a).unwrap();
    assert!(scan.table.last().unwrap().1 > 0.0);
    let fine = hopf_auxiliary(&region.refined(), 4.0 * MU_SCAN_CAP, a).unwrap();
    assert!(fine.max_value() > 0.0);
}

#[test]
fn region_validation() {
    let a = order(0.4);
    let mut r = HalfBallRegion::new(1, 0.5, a);
    r.grading = 1.0;
    assert!(matches!(hopf_auxiliary(&r, 10.0, a), Err(HopfError::NotGraded(_))));
    let mut r = HalfBallRegion::new(1, 0.5, a);
    r.t0 = 0.25;
    assert!(matches!(hopf_auxiliary(&r, 10.0, a), Err(HopfError::Region(_))));
    let r = HalfBallRegion::new(3, 0.5, a);
    assert!(matches!(hopf_auxiliary(&r, 10.0, a), Err(HopfError::Region(_))));
    let r = HalfBallRegion::new(1, 0.5, a);
    assert!(matches!(hopf_auxiliary(&r, -1.0, a), Err(HopfError::Mu(_))));
}

#[test]
fn nonuniform_caputo_matches_l1_on_uniform_grid() {
    let a = order(0.45);
    let times: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
    let y: Vec<f64> = times.iter().map(|t| (2.0 * t).sin() + t * t).collect();
    let nu = NonuniformCaputo::new(&times, a).apply(&y);
    let l1 = caputo_left(&TimeSeries::new(0.0, 1.0 / 40.0, y).unwrap(), a).unwrap();
    for (a, b) in nu.iter().zip(l1.values()).skip(1) {
        assert!((a - b).abs() < 1e-11 * b.abs().max(1.0));
    }
}

#[test]
fn time_grid_is_graded_and_nested() {
    let a = order(0.5);
    let r = HalfBallRegion::new(1, 1.0, a);
    let t = r.time_grid();
    assert_eq!(t[0], 0.0);
    assert_eq!(t.len(), 2 * r.time_nodes + 1);
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    // spacing shrinks towards t0
    let m = r.time_nodes;
    assert!(t[m] - t[m - 1] < t[1] - t[0]);
    let fine = r.refined().time_grid();
    for v in &t {
        assert!(fine.iter().any(|w| w.to_bits() == v.to_bits()));
    }
}
