use std::f64::consts::PI;

use fracrobin::mesh::{Domain, Face};
use fracrobin::robin_spectrum::cache::{CacheStatus, EigenCache};
use fracrobin::robin_spectrum::{
    characteristic, eigen_fd, eigen_interval, eigen_rectangle, frac_power_norm, project,
    AnalyticMode, LambdaTrace, RobinCoefficient, SpectrumMethod,
};
use proptest::prelude::*;

/// Root of the phase form kL + atan(k/λ_l) + atan(k/λ_r) = nπ; the left side
/// is increasing in k, so plain bisection on (0, nπ/L] is safe.
fn phase_root(n: usize, ll: f64, lr: f64, length: f64) -> f64 {
    let g = |k: f64| k * length + (k / ll).atan() + (k / lr).atan() - n as f64 * PI;
    let (mut lo, mut hi) = (0.0, n as f64 * PI / length);
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn dirichlet_limit() {
    let dom = Domain::interval(1.0, 64).unwrap();
    let s = eigen_interval(1e6, 1e6, &dom, 5).unwrap();
    for (n, p) in s.pairs.iter().enumerate() {
        let d = ((n + 1) as f64 * PI).powi(2);
        assert!(
            (p.mu / d - 1.0).abs() < 1e-3,
            "n={} mu={} dirichlet={d}",
            n + 1,
            p.mu
        );
    }
}

#[test]
fn matches_phase_equation_oracle() {
    let dom = Domain::interval(1.0, 64).unwrap();
    let s = eigen_interval(1.0, 1.0, &dom, 1).unwrap();
    let k1 = s.pairs[0].mu.sqrt();
    assert!(k1 > 0.0 && k1 < PI);
    assert!((k1 - phase_root(1, 1.0, 1.0, 1.0)).abs() < 1e-12);
    for &(ll, lr, l) in &[(0.3, 7.0, 2.0), (5.0, 0.05, 0.7), (1e3, 1.0, 1.0)] {
        let dom = Domain::interval(l, 32).unwrap();
        let s = eigen_interval(ll, lr, &dom, 12).unwrap();
        for (n, p) in s.pairs.iter().enumerate() {
            let k = p.mu.sqrt();
            let oracle = phase_root(n + 1, ll, lr, l);
            assert!(
                (k - oracle).abs() < 1e-10 * oracle,
                "{ll} {lr} {l} n={}",
                n + 1
            );
        }
    }
}

#[test]
fn eigenfunction_residual() {
    let dom = Domain::interval(1.3, 64).unwrap();
    let s = eigen_interval(0.8, 2.2, &dom, 8).unwrap();
    let fine = 4001;
    let h = 1.3 / (fine - 1) as f64;
    for p in &s.pairs {
        let Some(AnalyticMode::Interval(m)) = p.analytic else {
            panic!()
        };
        let mut analytic = 0.0f64;
        let mut fd = 0.0f64;
        for i in 1..fine - 1 {
            let x = i as f64 * h;
            analytic = analytic.max((-m.second_derivative(x) - p.mu * m.value(x)).abs());
            let d2 = (m.value(x - h) - 2.0 * m.value(x) + m.value(x + h)) / (h * h);
            fd = fd.max((-d2 - p.mu * m.value(x)).abs());
        }
        assert!(analytic <= 1e-8, "analytic residual {analytic}");
        // FD second derivative carries h²μ²/12 truncation
        assert!(
            fd <= 1e-8 + h * h * p.mu * p.mu / 12.0 * 2.0,
            "fd residual {fd}"
        );
    }
}

#[test]
fn gram_matrix_is_identity() {
    let dom = Domain::interval(1.0, 257).unwrap();
    let s = eigen_interval(1.0, 3.0, &dom, 10).unwrap();
    for (a, row) in s.gram(10).iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let e = if a == b { 1.0 } else { 0.0 };
            assert!((v - e).abs() <= 1e-8, "({a},{b}) = {v}");
        }
    }
    let sq = Domain::rectangle(1.0, 1.0, 129, 129).unwrap();
    let r = eigen_rectangle(&RobinCoefficient::uniform(2.0), &sq, 10).unwrap();
    for (a, row) in r.gram(10).iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let e = if a == b { 1.0 } else { 0.0 };
            assert!((v - e).abs() <= 1e-8, "rect ({a},{b}) = {v}");
        }
    }
}

#[test]
fn square_spectrum_symmetry_and_tensor_sum() {
    let sq = Domain::rectangle(1.0, 1.0, 33, 33).unwrap();
    // ask for more modes than are checked so no mirror pair is cut off
    let r = eigen_rectangle(&RobinCoefficient::uniform(1.5), &sq, 24).unwrap();
    let one_d = eigen_interval(1.5, 1.5, &Domain::interval(1.0, 33).unwrap(), 1).unwrap();
    assert!((r.pairs[0].mu - 2.0 * one_d.pairs[0].mu).abs() < 1e-12);
    let idx: Vec<(usize, usize)> = r
        .pairs
        .iter()
        .map(|p| match p.analytic {
            Some(AnalyticMode::Tensor { i, j, .. }) => (i, j),
            _ => panic!(),
        })
        .collect();
    for (p, &(i, j)) in r.pairs.iter().zip(&idx).take(12) {
        if i != j {
            let q = idx
                .iter()
                .position(|&x| x == (j, i))
                .expect("mirror mode present");
            assert_eq!(p.mu, r.pairs[q].mu);
            // lexicographic tie break
            assert_eq!(q > idx.iter().position(|&x| x == (i, j)).unwrap(), i < j);
        }
    }
    let mus = r.mus();
    assert!(mus.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn fd_spectrum_converges_at_second_order() {
    let (ll, lr) = (1.0, 4.0);
    let exact = eigen_interval(ll, lr, &Domain::interval(1.0, 64).unwrap(), 4)
        .unwrap()
        .mus();
    let mut errs = Vec::new();
    for nodes in [33, 65, 129, 257] {
        let dom = Domain::interval(1.0, nodes).unwrap();
        let fd = eigen_fd(&dom, &RobinCoefficient::interval(ll, lr), 4).unwrap();
        let e = fd
            .mus()
            .iter()
            .zip(&exact)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        errs.push(e);
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.8, "observed order {order}, errors {errs:?}");
    }
}

#[test]
fn fd_spectrum_positive_with_weyl_trend() {
    let dom = Domain::interval(1.0, 200).unwrap();
    let s = eigen_fd(&dom, &RobinCoefficient::interval(0.5, 2.0), 40).unwrap();
    let ratios: Vec<f64> = s
        .pairs
        .iter()
        .map(|p| p.mu / (p.index as f64).powi(2))
        .collect();
    assert!(s.pairs.iter().all(|p| p.mu > 0.0));
    let (lo, hi) = ratios[4..]
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    assert!(lo > 1.0 && hi < 15.0, "{lo} {hi}");

    let rect = Domain::rectangle(1.0, 1.0, 24, 24).unwrap();
    let lam = RobinCoefficient::uniform(1.0).with_face(
        Face::Top,
        LambdaTrace::Sampled((0..24).map(|i| 0.5 + 0.1 * i as f64).collect()),
    );
    let s2 = eigen_fd(&rect, &lam, 60).unwrap();
    assert!(s2.pairs.iter().all(|p| p.mu > 0.0));
    let r2: Vec<f64> = s2.pairs.iter().map(|p| p.mu / p.index as f64).collect();
    let (lo, hi) = r2[4..]
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    assert!(lo > 1.0 && hi < 30.0, "{lo} {hi}");
}

#[test]
fn fd_matches_rectangle_for_constant_faces() {
    let dom = Domain::rectangle(1.0, 0.8, 40, 32).unwrap();
    let lam = RobinCoefficient::faces(1.0, 2.0, 0.5, 3.0);
    let a = eigen_rectangle(&lam, &dom, 6).unwrap();
    let f = eigen_fd(&dom, &lam, 6).unwrap();
    for (x, y) in a.pairs.iter().zip(&f.pairs) {
        assert!(((x.mu - y.mu) / x.mu).abs() < 5e-3, "{} vs {}", x.mu, y.mu);
    }
}

#[test]
fn first_eigenvalue_increases_with_lambda() {
    let dom = Domain::interval(1.0, 32).unwrap();
    let mus: Vec<f64> = [0.1, 1.0, 10.0, 100.0]
        .iter()
        .map(|l| eigen_interval(*l, *l, &dom, 1).unwrap().pairs[0].mu)
        .collect();
    assert!(mus.windows(2).all(|w| w[0] < w[1]), "{mus:?}");
    assert!(mus[3] < PI * PI);
}

#[test]
fn eigenfunction_growth_trend() {
    let dom = Domain::interval(1.0, 513).unwrap();
    let s = eigen_interval(3.0, 0.5, &dom, 40).unwrap();
    let first = s.pairs[0].psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for p in &s.pairs {
        let peak = p.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(peak <= 2.0 * first * (1.0 + p.mu.sqrt()));
    }
}

#[test]
fn projection_properties() {
    let dom = Domain::interval(1.0, 129).unwrap();
    let s = eigen_interval(1.0, 2.0, &dom, 32).unwrap();
    let c = project(&s.pairs[2].psi, &s).unwrap();
    for (n, v) in c.iter().enumerate() {
        let e = if n == 2 { 1.0 } else { 0.0 };
        assert!((v - e).abs() < 1e-8);
    }
    assert!(project(&vec![0.0; 129], &s)
        .unwrap()
        .iter()
        .all(|v| *v == 0.0));
    assert!(project(&[1.0; 10], &s).is_err());
    // Parseval on a smooth field satisfying the Robin conditions closely
    let field = s.synthesize(&[0.5, -0.2, 0.1, 0.05]);
    let bumped: Vec<f64> = field
        .iter()
        .zip(dom.sample(|x, _| (x * (1.0 - x)).powi(3)))
        .map(|(a, b)| a + b)
        .collect();
    let coeffs = project(&bumped, &s).unwrap();
    let energy: f64 = coeffs.iter().map(|c| c * c).sum();
    let norm2 = fracrobin::mesh::inner(&s.weights, &bumped, &bumped);
    assert!((energy / norm2 - 1.0).abs() < 0.01);
}

#[test]
fn fractional_power_norm() {
    let dom = Domain::interval(1.0, 64).unwrap();
    let s = eigen_interval(5.0, 5.0, &dom, 6).unwrap();
    let c = [0.3, -0.4, 0.0, 1.2, 0.0, 0.1];
    let euclid = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((frac_power_norm(&c, &s, 0.0).unwrap() - euclid).abs() < 1e-15);
    let e1 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    assert!((frac_power_norm(&e1, &s, 1.5).unwrap() - s.pairs[0].mu.powf(1.5)).abs() < 1e-12);
    assert!(s.pairs[0].mu >= 1.0);
    let mut prev = 0.0;
    for g in [0.0, 0.5, 1.0, 2.0] {
        let v = frac_power_norm(&c, &s, g).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert!(frac_power_norm(&c, &s, -1.0).is_err());
    assert!(frac_power_norm(&c[..3], &s, 1.0).is_err());
}

#[test]
fn cache_hit_miss_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = EigenCache::new(dir.path());
    let dom = Domain::interval(1.0, 33).unwrap();
    let lam = RobinCoefficient::interval(1.0, 1.0);
    let (a, st) = cache
        .load_or_compute(&dom, &lam, 8, SpectrumMethod::Analytic)
        .unwrap();
    assert_eq!(st, CacheStatus::Miss);
    let (b, st) = cache
        .load_or_compute(&dom, &lam, 8, SpectrumMethod::Analytic)
        .unwrap();
    assert_eq!(st, CacheStatus::Hit);
    for (x, y) in a.pairs.iter().zip(&b.pairs) {
        assert_eq!(x.mu.to_bits(), y.mu.to_bits());
        assert_eq!(x.psi, y.psi);
    }
    let path = cache.path_for(&dom, &lam, 8, SpectrumMethod::Analytic);
    std::fs::write(&path, "fracrobin-eigen v1\ngarbage\n").unwrap();
    let (c, st) = cache
        .load_or_compute(&dom, &lam, 8, SpectrumMethod::Analytic)
        .unwrap();
    assert_eq!(st, CacheStatus::Recomputed);
    assert_eq!(c.pairs[3].mu, a.pairs[3].mu);
    assert!(cache
        .load_or_compute(
            &dom,
            &RobinCoefficient::interval(0.0, 1.0),
            8,
            SpectrumMethod::Analytic
        )
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_sit_in_their_windows(ll in 0.01f64..100.0, lr in 0.01f64..100.0, l in 0.5f64..3.0) {
        let dom = Domain::interval(l, 16).unwrap();
        let s = eigen_interval(ll, lr, &dom, 8).unwrap();
        for (n, p) in s.pairs.iter().enumerate() {
            let k = p.mu.sqrt();
            prop_assert!(k > n as f64 * PI / l && k < (n + 1) as f64 * PI / l);
            let scale = k * k + ll * lr + k * (ll + lr);
            prop_assert!(characteristic(k, ll, lr, l).abs() < 1e-12 * scale);
        }
        prop_assert!(s.mus().windows(2).all(|w| w[0] < w[1]));
    }
}
