use fracrobin::catalog::{parse_list, Scenario, SpaceProfile, TimeProfile};
use fracrobin::fd_oracle::{compare, solve_fd, FdConfig, FdError};
use fracrobin::mesh::Domain;
use fracrobin::mittag_leffler::relaxation;
use fracrobin::principles::suite;
use fracrobin::robin_spectrum::{eigen_interval, project};
use fracrobin::spectral_solver::{solve, SolverError};
use fracrobin::{FracOrder, RobinCoefficient};

fn sp(s: &str) -> Vec<SpaceProfile> {
    parse_list(s).unwrap()
}
fn tp(s: &str) -> Vec<TimeProfile> {
    parse_list(s).unwrap()
}

fn interval(alpha: f64, t: f64, nodes: usize) -> Scenario {
    Scenario::new(alpha, t, Domain::interval(1.0, nodes).unwrap(), RobinCoefficient::interval(1.0, 2.0))
}

#[test]
fn zero_data_gives_zero_field() {
    let sc = interval(0.5, 1.0, 33);
    let spec = sc.build(None).unwrap();
    let f = solve_fd(&spec, &FdConfig::new(33, 32)).unwrap();
    assert!(f.u.iter().all(|v| *v == 0.0));
}

#[test]
fn classical_limit_matches_heat_equation() {
    // α = 1 is backward Euler: error O(dt + h²) against e^{−μ1 t} ψ1
    let err = |j: usize, k: usize| {
        let mut sc = interval(1.0, 0.5, j);
        sc.u0 = sp("mode:1");
        let basis = eigen_interval(1.0, 2.0, &sc.domain, 4).unwrap();
        let spec = sc.build(Some(&basis)).unwrap();
        let f = solve_fd(&spec, &FdConfig::new(j, k)).unwrap();
        let (mu, psi) = (basis.pairs[0].mu, &basis.pairs[0].psi);
        let mut e = 0.0f64;
        for s in 0..=k {
            let d = (-mu * f.time(s)).exp();
            for (p, v) in psi.iter().enumerate() {
                e = e.max((f.at(s, p) - d * v).abs());
            }
        }
        e
    };
    let (e1, e2) = (err(33, 64), err(65, 128));
    assert!(e1 < 2e-2, "{e1:e}");
    assert!(e2 < 0.6 * e1, "{e1:e} {e2:e}");
}

#[test]
fn modal_projection_tracks_relaxation() {
    let alpha = 0.5;
    let mut sc = Scenario::new(alpha, 1.0, Domain::interval(1.0, 129).unwrap(), RobinCoefficient::uniform(1.0));
    sc.u0 = sp("mode:1");
    let basis = eigen_interval(1.0, 1.0, &sc.domain, 8).unwrap();
    let spec = sc.build(Some(&basis)).unwrap();
    let f = solve_fd(&spec, &FdConfig::new(129, 512)).unwrap();
    let a = FracOrder::new(alpha).unwrap();
    let mu = basis.pairs[0].mu;
    let mut worst = 0.0f64;
    for k in 0..=512 {
        let c = project(f.slice(k), &basis).unwrap()[0];
        worst = worst.max((c - relaxation(a, mu, f.time(k)).unwrap()).abs());
    }
    assert!(worst <= 0.02, "{worst:e}");
}

#[test]
fn compare_with_itself_is_zero() {
    let mut sc = interval(0.6, 1.0, 33);
    sc.u0 = sp("bump:0.5,0.3,1");
    let spec = sc.build(None).unwrap();
    let f = solve_fd(&spec, &FdConfig::new(33, 32)).unwrap();
    let c = compare(&f, &f).unwrap();
    assert_eq!((c.abs_l2l2, c.rel_l2l2, c.abs_max), (0.0, 0.0, 0.0));
}

#[test]
fn compare_rejects_grids_that_do_not_nest() {
    let mut sc = interval(0.6, 1.0, 33);
    sc.u0 = sp("bump:0.5,0.3,1");
    let a = solve_fd(&sc.build(None).unwrap(), &FdConfig::new(33, 32)).unwrap();
    let sc2 = sc.on(Domain::interval(1.0, 21).unwrap());
    let b = solve_fd(&sc2.build(None).unwrap(), &FdConfig::new(21, 32)).unwrap();
    assert!(matches!(compare(&a, &b), Err(SolverError::NotNested(_))));
    let c = solve_fd(&sc.build(None).unwrap(), &FdConfig::new(33, 48)).unwrap();
    assert!(matches!(compare(&a, &c), Err(SolverError::NotNested(_))));
}

fn mixed(alpha: f64, nodes: usize) -> Scenario {
    let mut sc = interval(alpha, 1.0, nodes);
    sc.u0 = sp("lift+bump:0.4,0.25,1");
    sc.f = sp("poly:1,-1");
    sc.g = tp("cos:3");
    sc.b.left = sp("const:0.5");
    sc.b.right = sp("const:-0.25");
    sc.b.time = tp("const:1+linear:0.5");
    sc
}

#[test]
fn error_decreases_under_joint_refinement() {
    let alpha = 0.6;
    let reference = {
        let sc = mixed(alpha, 257);
        let basis = eigen_interval(1.0, 2.0, &sc.domain, 128).unwrap();
        solve(&sc.build(Some(&basis)).unwrap(), &basis, 512).unwrap()
    };
    let errs: Vec<f64> = [(17, 32), (33, 64), (65, 128)]
        .iter()
        .map(|&(j, k)| {
            let sc = mixed(alpha, j);
            let f = solve_fd(&sc.build(None).unwrap(), &FdConfig::new(j, k)).unwrap();
            compare(&f, &reference).unwrap().rel_l2l2
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.02, "{errs:?}");
}

#[test]
fn temporal_order_on_smooth_solution() {
    // zero start and a t³ source keep u smooth in time
    for alpha in [0.3, 0.5, 0.8] {
        let build = |k: usize| {
            let mut sc = interval(alpha, 1.0, 65);
            sc.f = sp("mode:1");
            sc.g = tp("power:3");
            let basis = eigen_interval(1.0, 2.0, &sc.domain, 4).unwrap();
            solve_fd(&sc.build(Some(&basis)).unwrap(), &FdConfig::new(65, k)).unwrap()
        };
        let reference = build(2048);
        let errs: Vec<f64> = [32, 64, 128].iter().map(|k| compare(&build(*k), &reference).unwrap().abs_l2l2).collect();
        for w in errs.windows(2) {
            let p = (w[0] / w[1]).log2();
            assert!((p - (2.0 - alpha)).abs() <= 0.25, "α={alpha}: {p} from {errs:?}");
        }
    }
}

#[test]
fn nonnegative_data_give_nonnegative_solution() {
    let dom = Domain::interval(1.0, 33).unwrap();
    let lam = RobinCoefficient::interval(1.0, 2.0);
    let basis = eigen_interval(1.0, 2.0, &dom, 8).unwrap();
    for sc in suite::random_nonnegative(7, 12, &dom, &lam, &basis) {
        let spec = sc.build(Some(&basis)).unwrap();
        let f = solve_fd(&spec, &FdConfig::new(33, 64)).unwrap();
        let m = f.u.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(m >= -1e-10, "{m:e}");
    }
}

#[test]
fn stable_for_large_parabolic_ratio() {
    let j = 33;
    let h2 = (1.0f64 / 32.0).powi(2);
    for ratio in [0.1, 1.0, 10.0, 100.0] {
        let k = 64;
        let mut sc = interval(0.5, ratio * h2 * k as f64, j);
        sc.u0 = sp("mode:1+mode:3,-0.7");
        let basis = eigen_interval(1.0, 2.0, &sc.domain, 4).unwrap();
        let spec = sc.build(Some(&basis)).unwrap();
        let f = solve_fd(&spec, &FdConfig::new(j, k)).unwrap();
        let u0max = spec.u0.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(f.u.iter().all(|v| v.is_finite()));
        assert!(f.max_abs() <= u0max * (1.0 + 1e-12), "ratio {ratio}: {} > {u0max}", f.max_abs());
    }
}

#[test]
fn components_add_up() {
    let sc = mixed(0.4, 33);
    let f = solve_fd(&sc.build(None).unwrap(), &FdConfig::new(33, 32)).unwrap();
    for i in 0..f.u.len() {
        assert!((f.u[i] - f.u1[i] - f.u2[i] - f.u3[i]).abs() < 1e-14);
    }
}

#[test]
fn rejects_bad_configurations() {
    let sc = interval(0.5, 1.0, 33);
    let spec = sc.build(None).unwrap();
    assert!(matches!(solve_fd(&spec, &FdConfig::new(33, 8)), Err(FdError::TooCoarse { .. })));
    assert!(matches!(
        solve_fd(&spec, &FdConfig::new(65, 32)),
        Err(FdError::MeshMismatch { cfg: 65, mesh: 33 })
    ));
    let rect = Scenario::new(
        0.5,
        1.0,
        Domain::rectangle(1.0, 1.0, 17, 17).unwrap(),
        RobinCoefficient::uniform(1.0),
    );
    assert!(matches!(solve_fd(&rect.build(None).unwrap(), &FdConfig::new(17, 32)), Err(FdError::NotInterval)));
}
