use std::f64::consts::PI;

use super::{EigenPair, RobinCoefficient, Spectrum, SpectrumError, SpectrumMethod};
use crate::mesh::{inner, Domain, DomainKind, Face};

/// `ψ(x) = scale·(cos kx + a sin kx)` with `a = λ_left / k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode1D {
    pub k: f64,
    pub a: f64,
    pub scale: f64,
}

impl Mode1D {
    pub fn value(&self, x: f64) -> f64 {
        let (s, c) = (self.k * x).sin_cos();
        self.scale * (c + self.a * s)
    }
    pub fn derivative(&self, x: f64) -> f64 {
        let (s, c) = (self.k * x).sin_cos();
        self.scale * self.k * (self.a * c - s)
    }
    pub fn second_derivative(&self, x: f64) -> f64 {
        -self.k * self.k * self.value(x)
    }
    pub fn mu(&self) -> f64 {
        self.k * self.k
    }
}

/// Closed-form description of an eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticMode {
    Interval(Mode1D),
    /// `ψ(x, y) = ψ_i(x)·ψ_j(y)`; `i`, `j` start at 1.
    Tensor {
        x: Mode1D,
        y: Mode1D,
        i: usize,
        j: usize,
    },
}

impl AnalyticMode {
    pub fn value(&self, p: [f64; 2]) -> f64 {
        match self {
            AnalyticMode::Interval(m) => m.value(p[0]),
            AnalyticMode::Tensor { x, y, .. } => x.value(p[0]) * y.value(p[1]),
        }
    }
    pub fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            AnalyticMode::Interval(m) => [m.derivative(p[0]), 0.0],
            AnalyticMode::Tensor { x, y, .. } => [
                x.derivative(p[0]) * y.value(p[1]),
                x.value(p[0]) * y.derivative(p[1]),
            ],
        }
    }
    pub fn laplacian(&self, p: [f64; 2]) -> f64 {
        match self {
            AnalyticMode::Interval(m) => m.second_derivative(p[0]),
            AnalyticMode::Tensor { x, y, .. } => {
                x.second_derivative(p[0]) * y.value(p[1])
                    + x.value(p[0]) * y.second_derivative(p[1])
            }
        }
    }
}

/// `(k² − λ_l λ_r) sin(kL) − k(λ_l + λ_r) cos(kL)`.
pub fn characteristic(k: f64, lambda_left: f64, lambda_right: f64, length: f64) -> f64 {
    let (s, c) = (k * length).sin_cos();
    (k * k - lambda_left * lambda_right) * s - k * (lambda_left + lambda_right) * c
}

fn bisect_root(n: usize, ll: f64, lr: f64, length: f64) -> Result<f64, SpectrumError> {
    let nudge = 1e-9 * PI / length;
    let mut lo = (n - 1) as f64 * PI / length + nudge;
    let mut hi = n as f64 * PI / length - nudge;
    let f = |k: f64| characteristic(k, ll, lr, length);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SpectrumError::Bracket { n, lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_lambda(face: Face, v: f64) -> Result<(), SpectrumError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(SpectrumError::NonPositiveLambda {
            face: face.name(),
            value: v,
        })
    }
}

/// First `n` modes on a 1D mesh, normalised in the discrete inner product.
fn modes_1d(
    dom: &Domain,
    ll: f64,
    lr: f64,
    n: usize,
) -> Result<Vec<(Mode1D, Vec<f64>)>, SpectrumError> {
    check_lambda(Face::Left, ll)?;
    check_lambda(Face::Right, lr)?;
    let length = dom.lengths()[0];
    let w = SpectrumMethod::Analytic.weights(dom);
    (1..=n)
        .map(|i| {
            let k = bisect_root(i, ll, lr, length)?;
            let mut mode = Mode1D {
                k,
                a: ll / k,
                scale: 1.0,
            };
            let raw: Vec<f64> = (0..dom.nx()).map(|m| mode.value(dom.x(m))).collect();
            let nrm = inner(&w, &raw, &raw).sqrt();
            mode.scale = 1.0 / nrm;
            let psi = raw.into_iter().map(|v| v / nrm).collect();
            Ok((mode, psi))
        })
        .collect()
}

fn check_count(n: usize, dom: &Domain) -> Result<(), SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::NoModes);
    }
    if n > dom.len() {
        return Err(SpectrumError::TooManyModes {
            requested: n,
            available: dom.len(),
        });
    }
    Ok(())
}

/// First `n` Robin eigenpairs on an interval, one root of the
/// characteristic equation per window `((n−1)π/L, nπ/L)`.
pub fn eigen_interval(
    lambda_left: f64,
    lambda_right: f64,
    dom: &Domain,
    n: usize,
) -> Result<Spectrum, SpectrumError> {
    if dom.kind() != DomainKind::Interval {
        return Err(SpectrumError::Mesh(crate::mesh::MeshError::Mismatch {
            expected: 1,
            got: dom.dim(),
        }));
    }
    check_count(n, dom)?;
    let pairs = modes_1d(dom, lambda_left, lambda_right, n)?
        .into_iter()
        .enumerate()
        .map(|(i, (mode, psi))| EigenPair {
            index: i + 1,
            mu: mode.mu(),
            psi,
            analytic: Some(AnalyticMode::Interval(mode)),
        })
        .collect();
    Spectrum::new(
        dom.clone(),
        RobinCoefficient::interval(lambda_left, lambda_right),
        SpectrumMethod::Analytic,
        pairs,
        SpectrumMethod::Analytic.weights(dom),
    )
}

/// First `n` tensor-product eigenpairs on a rectangle, ascending in μ with
/// ties broken by `(i, j)`. Left/right λ act on the x factor, bottom/top on
/// the y factor.
pub fn eigen_rectangle(
    lam: &RobinCoefficient,
    dom: &Domain,
    n: usize,
) -> Result<Spectrum, SpectrumError> {
    let ydom = match dom.y_axis() {
        Some(y) => y,
        None => return eigen_interval_from(lam, dom, n),
    };
    check_count(n, dom)?;
    let face = |f: Face| lam.constant(f).ok_or(SpectrumError::VariableLambda);
    let (ll, lr, lb, lt) = (
        face(Face::Left)?,
        face(Face::Right)?,
        face(Face::Bottom)?,
        face(Face::Top)?,
    );
    let xdom = dom.x_axis();
    let xm = modes_1d(&xdom, ll, lr, n.min(xdom.nx()))?;
    let ym = modes_1d(&ydom, lb, lt, n.min(ydom.nx()))?;
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(xm.len() * ym.len());
    for (i, (mx, _)) in xm.iter().enumerate() {
        for (j, (my, _)) in ym.iter().enumerate() {
            cand.push((mx.mu() + my.mu(), i, j));
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let pairs = cand
        .into_iter()
        .take(n)
        .enumerate()
        .map(|(idx, (mu, i, j))| {
            let (mx, px) = &xm[i];
            let (my, py) = &ym[j];
            let mut psi = Vec::with_capacity(dom.len());
            for yj in py {
                psi.extend(px.iter().map(|xi| xi * yj));
            }
            EigenPair {
                index: idx + 1,
                mu,
                psi,
                analytic: Some(AnalyticMode::Tensor {
                    x: *mx,
                    y: *my,
                    i: i + 1,
                    j: j + 1,
                }),
            }
        })
        .collect();
    Spectrum::new(
        dom.clone(),
        lam.clone(),
        SpectrumMethod::Analytic,
        pairs,
        SpectrumMethod::Analytic.weights(dom),
    )
}

fn eigen_interval_from(
    lam: &RobinCoefficient,
    dom: &Domain,
    n: usize,
) -> Result<Spectrum, SpectrumError> {
    let ll = lam
        .constant(Face::Left)
        .ok_or(SpectrumError::VariableLambda)?;
    let lr = lam
        .constant(Face::Right)
        .ok_or(SpectrumError::VariableLambda)?;
    eigen_interval(ll, lr, dom, n)
}

/// Analytic spectrum for any domain with face-wise constant λ.
pub(crate) fn eigen_analytic(
    lam: &RobinCoefficient,
    dom: &Domain,
    n: usize,
) -> Result<Spectrum, SpectrumError> {
    match dom.kind() {
        DomainKind::Interval => eigen_interval_from(lam, dom, n),
        DomainKind::Rectangle => eigen_rectangle(lam, dom, n),
    }
}
