//! Discrete fractional calculus on uniformly sampled time series.
//!
//! * Riemann–Liouville integrals by piecewise-linear product integration
//!   (kernel moments integrated exactly),
//! * Caputo derivative by the L1 scheme,
//! * Riemann–Liouville derivative as the discrete time derivative of the
//!   order `1 - α` integral,
//! * causal trapezoid convolution.
//!
//! Derivative outputs do not define a value at the first node; it is stored
//! as NaN and must not be read.

use thiserror::Error;

use crate::real::Real;
use crate::special::gamma;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("fractional order {0} outside the admissible range")]
    InvalidOrder(f64),
    #[error("time series needs at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("sample times are not uniformly spaced (node {index})")]
    NonUniform { index: usize },
    #[error("time grids do not match: {0}")]
    GridMismatch(String),
}

/// Fractional order α ∈ (0, 1]. α = 1 is the classical-limit mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder<T = f64> {
    alpha: T,
}

impl<T: Real> FracOrder<T> {
    pub fn new(alpha: T) -> Result<Self, FracError> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(FracError::InvalidOrder(alpha.to_f64_lossy()));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// True for α = 1 (first-order time derivative).
    #[inline]
    pub fn is_classical(&self) -> bool {
        self.alpha == T::one()
    }

    /// The complementary order 1 - α, only defined for α < 1.
    pub fn complement(&self) -> Result<Self, FracError> {
        Self::new(T::one() - self.alpha)
    }
}

/// Uniformly sampled series `values[k] ≈ y(t0 + k dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T = f64> {
    t0: T,
    dt: T,
    values: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    pub fn new(t0: T, dt: T, values: Vec<T>) -> Result<Self, FracError> {
        if values.len() < 2 {
            return Err(FracError::TooShort(values.len()));
        }
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(FracError::InvalidStep(dt.to_f64_lossy()));
        }
        Ok(Self { t0, dt, values })
    }

    /// Builds a series from explicit sample times, rejecting non-uniform grids.
    pub fn from_samples(times: &[T], values: Vec<T>) -> Result<Self, FracError> {
        if times.len() != values.len() {
            return Err(FracError::GridMismatch(format!(
                "{} times, {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(FracError::TooShort(times.len()));
        }
        let dt = times[1] - times[0];
        let tol = T::lit(1e-9) * dt.abs().max(T::epsilon());
        for (i, w) in times.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > tol {
                return Err(FracError::NonUniform { index: i + 1 });
            }
        }
        Self::new(times[0], dt, values)
    }

    /// Samples `f` on `n` nodes starting at `t0`.
    pub fn sample<F: Fn(T) -> T>(t0: T, dt: T, n: usize, f: F) -> Result<Self, FracError> {
        let values = (0..n).map(|k| f(t0 + dt * T::of_usize(k))).collect();
        Self::new(t0, dt, values)
    }

    #[inline]
    pub fn t0(&self) -> T {
        self.t0
    }
    #[inline]
    pub fn dt(&self) -> T {
        self.dt
    }
    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    #[inline]
    pub fn time(&self, k: usize) -> T {
        self.t0 + self.dt * T::of_usize(k)
    }
    /// Final sample time.
    pub fn end(&self) -> T {
        self.time(self.len() - 1)
    }
    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    fn with_values(&self, values: Vec<T>) -> Self {
        Self {
            t0: self.t0,
            dt: self.dt,
            values,
        }
    }

    /// Same samples in reverse order (t ↦ t0 + end - t).
    pub fn reversed(&self) -> Self {
        let mut v = self.values.clone();
        v.reverse();
        self.with_values(v)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        let tol = T::lit(1e-12) * (self.dt.abs() + self.t0.abs()).max(T::one());
        self.len() == other.len()
            && (self.dt - other.dt).abs() <= tol
            && (self.t0 - other.t0).abs() <= tol
    }

    /// max |a_k - b_k| over nodes `from..`.
    pub fn max_abs_diff(&self, other: &Self, from: usize) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .skip(from)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

fn require_strict_order<T: Real>(a: FracOrder<T>) -> Result<T, FracError> {
    let alpha = a.alpha();
    if alpha >= T::one() {
        return Err(FracError::InvalidOrder(alpha.to_f64_lossy()));
    }
    Ok(alpha)
}

/// Left Riemann–Liouville integral `(I^α_{t0+} y)(t_k)` at every node.
///
/// The integrand is interpolated piecewise linearly and each kernel moment is
/// integrated exactly, so the result is exact for piecewise-linear `y`.
pub fn rl_integral_left<T: Real>(
    y: &TimeSeries<T>,
    a: FracOrder<T>,
) -> Result<TimeSeries<T>, FracError> {
    let alpha = require_strict_order(a)?;
    let n = y.len();
    let ap1 = alpha + T::one();
    // p[m] = m^{α+1}
    let p: Vec<T> = (0..=n).map(|m| T::of_usize(m).powf(ap1)).collect();
    let scale = y.dt().powf(alpha) / gamma(alpha + T::lit(2.0));
    let v = y.values();
    let mut out = vec![T::zero(); n];
    for k in 1..n {
        let kf = T::of_usize(k);
        // weight of y_0
        let mut acc = (p[k - 1] - (kf - alpha - T::one()) * kf.powf(alpha)) * v[0];
        for j in 1..k {
            let m = k - j;
            acc = acc + (p[m + 1] + p[m - 1] - T::lit(2.0) * p[m]) * v[j];
        }
        acc = acc + v[k];
        out[k] = scale * acc;
    }
    Ok(y.with_values(out))
}

/// Right Riemann–Liouville integral `(I^α_{T-} y)(t_k)`, zero at the last node.
pub fn rl_integral_right<T: Real>(
    y: &TimeSeries<T>,
    a: FracOrder<T>,
) -> Result<TimeSeries<T>, FracError> {
    let left = rl_integral_left(&y.reversed(), a)?;
    Ok(left.reversed())
}

/// L1-scheme Caputo derivative at nodes `1..`; node 0 holds NaN.
///
/// For α = 1 this is the backward difference.
pub fn caputo_left<T: Real>(
    y: &TimeSeries<T>,
    a: FracOrder<T>,
) -> Result<TimeSeries<T>, FracError> {
    let alpha = a.alpha();
    let n = y.len();
    let one_m = T::one() - alpha;
    let b: Vec<T> = (0..n)
        .map(|m| {
            if m == 0 {
                T::one()
            } else {
                T::of_usize(m + 1).powf(one_m) - T::of_usize(m).powf(one_m)
            }
        })
        .collect();
    let scale = y.dt().powf(-alpha) / gamma(T::lit(2.0) - alpha);
    let v = y.values();
    let diffs: Vec<T> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = vec![T::nan(); n];
    for k in 1..n {
        let mut acc = T::zero();
        for j in 0..k {
            acc = acc + b[k - 1 - j] * diffs[j];
        }
        out[k] = scale * acc;
    }
    Ok(y.with_values(out))
}

/// Riemann–Liouville derivative `d/dt (I^{1-α} y)`; node 0 holds NaN.
///
/// Central differences at interior nodes, a backward difference at the last.
pub fn rl_derivative_left<T: Real>(
    y: &TimeSeries<T>,
    a: FracOrder<T>,
) -> Result<TimeSeries<T>, FracError> {
    require_strict_order(a)?;
    let integral = rl_integral_left(y, a.complement()?)?;
    let w = integral.values();
    let n = w.len();
    let dt = y.dt();
    let mut out = vec![T::nan(); n];
    for k in 1..n {
        out[k] = if k + 1 < n {
            (w[k + 1] - w[k - 1]) / (T::lit(2.0) * dt)
        } else {
            (w[k] - w[k - 1]) / dt
        };
    }
    Ok(y.with_values(out))
}

/// Causal convolution `(u * v)(t_k) = ∫_{t0}^{t_k} u(t_k - τ) v(τ) dτ` by the
/// trapezoid rule.
pub fn convolve<T: Real>(u: &TimeSeries<T>, v: &TimeSeries<T>) -> Result<TimeSeries<T>, FracError> {
    if !u.same_grid(v) {
        return Err(FracError::GridMismatch(format!(
            "len {} vs {}, dt {} vs {}",
            u.len(),
            v.len(),
            u.dt(),
            v.dt()
        )));
    }
    let n = u.len();
    let (uv, vv) = (u.values(), v.values());
    let half = T::lit(0.5);
    let mut out = vec![T::zero(); n];
    for k in 1..n {
        let mut acc = half * (uv[k] * vv[0] + uv[0] * vv[k]);
        for j in 1..k {
            acc = acc + uv[k - j] * vv[j];
        }
        out[k] = u.dt() * acc;
    }
    Ok(u.with_values(out))
}
