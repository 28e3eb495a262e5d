//! Quadrature rules shared by the solvers and the verification code.
//!
//! * adaptive Gauss–Kronrod (7/15) on finite intervals,
//! * fixed 3-point Gauss–Legendre,
//! * uniform-mesh weights: composite trapezoid and the endpoint-corrected
//!   (Gregory) trapezoid used for inner products against analytic modes.

use crate::real::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    /// Estimated absolute error.
    pub error: T,
    pub converged: bool,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(WGK[j]) * s;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * s;
        }
    }
    let value = kronrod * half_len;
    let err = ((kronrod - gauss) * half_len).abs();
    (value, err)
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·|I|)`
/// or `max_intervals` subintervals have been used.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
    max_intervals: usize,
) -> QuadResult<T> {
    if a == b {
        return QuadResult {
            value: T::zero(),
            error: T::zero(),
            converged: true,
        };
    }
    let (v, e) = gk15(&f, a, b);
    let mut segments = vec![(a, b, v, e)];
    loop {
        let total: T = segments.iter().map(|s| s.2).sum();
        let err: T = segments.iter().map(|s| s.3).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target || segments.len() >= max_intervals {
            return QuadResult {
                value: total,
                error: err,
                converged: err <= target,
            };
        }
        let (idx, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, s)| {
                if s.3 > acc.1 {
                    (i, s.3)
                } else {
                    acc
                }
            });
        let (lo, hi, _, _) = segments.swap_remove(idx);
        let mid = T::lit(0.5) * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}

/// Three-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss3<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T) -> T {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let x = T::lit(0.774_596_669_241_483_4) * h;
    let w_outer = T::lit(5.0 / 9.0);
    let w_mid = T::lit(8.0 / 9.0);
    h * (w_outer * (f(c - x) + f(c + x)) + w_mid * f(c))
}

/// Composite trapezoid weights for `nodes` points with spacing `h`.
pub fn trapezoid_weights<T: Real>(nodes: usize, h: T) -> Vec<T> {
    let mut w = vec![h; nodes];
    if nodes > 0 {
        w[0] = h * T::lit(0.5);
        w[nodes - 1] = h * T::lit(0.5);
    }
    if nodes == 1 {
        w[0] = T::zero();
    }
    w
}

/// Default number of Gregory endpoint corrections.
pub const GREGORY_CORRECTIONS: usize = 6;

// Bernoulli numbers B_2, B_4, B_6, B_8, B_10.
const BERNOULLI_EVEN: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];

fn gregory_end_corrections(p: usize) -> Vec<f64> {
    // Solve Σ_i δ_i i^m = r_m (m = 0..p-1), r_m the Euler–Maclaurin
    // left-endpoint term for x^m.
    let mut a = vec![vec![0.0f64; p]; p];
    let mut r = vec![0.0f64; p];
    for m in 0..p {
        for (i, row) in a[m].iter_mut().enumerate() {
            *row = if m == 0 {
                1.0
            } else {
                (i as f64).powi(m as i32)
            };
        }
        if m % 2 == 1 {
            r[m] = BERNOULLI_EVEN[(m - 1) / 2] / (m as f64 + 1.0);
        }
    }
    solve_dense(a, r)
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Endpoint-corrected trapezoid (Gregory) weights for `nodes` uniformly spaced
/// points with spacing `h`. Falls back to fewer corrections on short meshes.
pub fn gregory_weights<T: Real>(nodes: usize, h: T) -> Vec<T> {
    let p = GREGORY_CORRECTIONS.min(nodes / 2);
    let mut w = trapezoid_weights(nodes, T::one());
    if p >= 2 {
        let delta = gregory_end_corrections(p);
        for (i, d) in delta.iter().enumerate() {
            let d = T::lit(*d);
            w[i] = w[i] + d;
            w[nodes - 1 - i] = w[nodes - 1 - i] + d;
        }
    }
    w.into_iter().map(|x| x * h).collect()
}
