//! Robin eigen-system of `-Δ` on an interval or a rectangle:
//! `-Δψ = μψ` in the domain, `∂ψ/∂ν + λψ = 0` on the boundary.
//!
//! Analytic paths (constant λ per face) use the transcendental
//! characteristic equation and tensor products; the finite-difference path
//! handles λ sampled along each face.

mod analytic;
pub mod cache;
mod fd;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::mesh::{BoundaryTrace, Domain, Face, MeshError};

pub use analytic::{characteristic, eigen_interval, eigen_rectangle, AnalyticMode, Mode1D};
pub use fd::{eigen_fd, RobinStiffness, FD_MAX_UNKNOWNS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(
        "Robin coefficient on the {face} face must be strictly positive (λ ≥ λ⁻ > 0), got {value}"
    )]
    NonPositiveLambda { face: &'static str, value: f64 },
    #[error("Robin coefficient on the {face} face has {got} samples, expected {expected}")]
    TraceLength {
        face: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no sign change of the characteristic function for mode {n} in ({lo}, {hi})")]
    Bracket { n: usize, lo: f64, hi: f64 },
    #[error("λ varies along a face; use the finite-difference eigensolver")]
    VariableLambda,
    #[error("requested {requested} modes but only {available} are available")]
    TooManyModes { requested: usize, available: usize },
    #[error("at least one mode must be requested")]
    NoModes,
    #[error("{0} unknowns exceed the dense eigensolver limit")]
    TooLarge(usize),
    #[error("finite-difference Robin operator is not symmetric (defect {0:e}); construction bug")]
    Asymmetric(f64),
    #[error("fractional power must be non-negative, got {0}")]
    NegativeGamma(f64),
    #[error("{got} coefficients for a basis of {expected} modes")]
    CoefficientCount { expected: usize, got: usize },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// λ on one face: a constant, or one value per face node.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaTrace {
    Const(f64),
    Sampled(Vec<f64>),
}

impl LambdaTrace {
    fn at(&self, s: usize) -> f64 {
        match self {
            LambdaTrace::Const(v) => *v,
            LambdaTrace::Sampled(v) => v[s],
        }
    }
}

/// Robin (impedance) coefficient per face. On intervals only `left` and
/// `right` are used.
#[derive(Debug, Clone, PartialEq)]
pub struct RobinCoefficient {
    pub left: LambdaTrace,
    pub right: LambdaTrace,
    pub bottom: LambdaTrace,
    pub top: LambdaTrace,
}

impl RobinCoefficient {
    pub fn interval(left: f64, right: f64) -> Self {
        Self::faces(left, right, left, right)
    }

    pub fn faces(left: f64, right: f64, bottom: f64, top: f64) -> Self {
        Self {
            left: LambdaTrace::Const(left),
            right: LambdaTrace::Const(right),
            bottom: LambdaTrace::Const(bottom),
            top: LambdaTrace::Const(top),
        }
    }

    pub fn uniform(lambda: f64) -> Self {
        Self::faces(lambda, lambda, lambda, lambda)
    }

    pub fn face(&self, face: Face) -> &LambdaTrace {
        match face {
            Face::Left => &self.left,
            Face::Right => &self.right,
            Face::Bottom => &self.bottom,
            Face::Top => &self.top,
        }
    }

    pub fn with_face(mut self, face: Face, trace: LambdaTrace) -> Self {
        match face {
            Face::Left => self.left = trace,
            Face::Right => self.right = trace,
            Face::Bottom => self.bottom = trace,
            Face::Top => self.top = trace,
        }
        self
    }

    /// Checks positivity and trace lengths against a domain.
    pub fn validate(&self, dom: &Domain) -> Result<(), SpectrumError> {
        for &face in dom.faces() {
            let vals: Vec<f64> = match self.face(face) {
                LambdaTrace::Const(v) => vec![*v],
                LambdaTrace::Sampled(v) => {
                    if v.len() != dom.face_len(face) {
                        return Err(SpectrumError::TraceLength {
                            face: face.name(),
                            expected: dom.face_len(face),
                            got: v.len(),
                        });
                    }
                    v.clone()
                }
            };
            if let Some(bad) = vals.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(SpectrumError::NonPositiveLambda {
                    face: face.name(),
                    value: *bad,
                });
            }
        }
        Ok(())
    }

    /// Constant value on a face, if it is constant.
    pub fn constant(&self, face: Face) -> Option<f64> {
        match self.face(face) {
            LambdaTrace::Const(v) => Some(*v),
            LambdaTrace::Sampled(v) => {
                let first = *v.first()?;
                v.iter().all(|x| *x == first).then_some(first)
            }
        }
    }

    pub fn is_piecewise_constant(&self, dom: &Domain) -> bool {
        dom.faces().iter().all(|f| self.constant(*f).is_some())
    }

    /// λ at the nodes of each face.
    pub fn trace(&self, dom: &Domain) -> BoundaryTrace {
        let mut out = BoundaryTrace::default();
        for &face in dom.faces() {
            let tr = self.face(face);
            *out.face_mut(face) = (0..dom.face_len(face)).map(|s| tr.at(s)).collect();
        }
        out
    }

    pub fn min(&self, dom: &Domain) -> f64 {
        self.trace(dom).min()
    }
}

/// How a spectrum was computed; fixes the quadrature used for projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumMethod {
    /// Closed-form eigenfunctions; endpoint-corrected trapezoid weights.
    Analytic,
    /// Finite-difference eigenvectors; trapezoid weights.
    FiniteDifference,
}

impl SpectrumMethod {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumMethod::Analytic => "analytic",
            SpectrumMethod::FiniteDifference => "fd",
        }
    }

    pub fn weights(self, dom: &Domain) -> Vec<f64> {
        match self {
            SpectrumMethod::Analytic => dom.gregory_weights(),
            SpectrumMethod::FiniteDifference => dom.trapezoid_weights(),
        }
    }
}

/// One eigenpair. `index` starts at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub index: usize,
    pub mu: f64,
    pub psi: Vec<f64>,
    pub analytic: Option<AnalyticMode>,
}

/// An ordered set of eigenpairs on a mesh, orthonormal in `weights` up to
/// quadrature error.
///
/// For analytic modes the discrete Gram matrix differs from the identity by
/// the quadrature error of the endpoint-corrected rule, which grows for modes
/// near the mesh Nyquist limit. [`project`] therefore solves with the Cholesky
/// factor of that Gram matrix (the discrete L² projection onto the span), so
/// that projecting a basis function returns the unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub domain: Domain,
    pub lambda: RobinCoefficient,
    pub method: SpectrumMethod,
    pub pairs: Vec<EigenPair>,
    pub weights: Vec<f64>,
    gram_factor: Option<(usize, Vec<f64>)>,
}

impl Spectrum {
    pub fn new(
        domain: Domain,
        lambda: RobinCoefficient,
        method: SpectrumMethod,
        pairs: Vec<EigenPair>,
        weights: Vec<f64>,
    ) -> Result<Self, SpectrumError> {
        let mut s = Self {
            domain,
            lambda,
            method,
            pairs,
            weights,
            gram_factor: None,
        };
        if method == SpectrumMethod::Analytic {
            let n = s.len();
            let g = s.gram_flat();
            s.gram_factor = Some((n, crate::linalg::cholesky(&g, n)?));
        }
        Ok(s)
    }

    fn gram_flat(&self) -> Vec<f64> {
        let n = self.len();
        let tensor: Option<Vec<(Mode1D, Mode1D)>> = self
            .pairs
            .iter()
            .map(|p| match p.analytic {
                Some(AnalyticMode::Tensor { x, y, .. }) => Some((x, y)),
                _ => None,
            })
            .collect();
        let mut g = vec![0.0; n * n];
        match (tensor, self.domain.y_axis()) {
            (Some(modes), Some(ydom)) => {
                // tensor weights factorise: (ψ_a, ψ_b) = (X_a, X_b)_x (Y_a, Y_b)_y
                let xdom = self.domain.x_axis();
                let (wx, wy) = (self.method.weights(&xdom), self.method.weights(&ydom));
                let xs: Vec<Vec<f64>> = modes
                    .iter()
                    .map(|(m, _)| (0..xdom.nx()).map(|i| m.value(xdom.x(i))).collect())
                    .collect();
                let ys: Vec<Vec<f64>> = modes
                    .iter()
                    .map(|(_, m)| (0..ydom.nx()).map(|j| m.value(ydom.x(j))).collect())
                    .collect();
                for a in 0..n {
                    for b in 0..=a {
                        let v = crate::mesh::inner(&wx, &xs[a], &xs[b])
                            * crate::mesh::inner(&wy, &ys[a], &ys[b]);
                        g[a * n + b] = v;
                        g[b * n + a] = v;
                    }
                }
            }
            _ => {
                for a in 0..n {
                    for b in 0..=a {
                        let v = crate::mesh::inner(
                            &self.weights,
                            &self.pairs[a].psi,
                            &self.pairs[b].psi,
                        );
                        g[a * n + b] = v;
                        g[b * n + a] = v;
                    }
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn mus(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.mu).collect()
    }

    /// First `n` modes.
    pub fn truncated(&self, n: usize) -> Result<Spectrum, SpectrumError> {
        if n > self.len() {
            return Err(SpectrumError::TooManyModes {
                requested: n,
                available: self.len(),
            });
        }
        let mut s = self.clone();
        s.pairs.truncate(n);
        // the leading block of a Cholesky factor factors the leading block
        Ok(s)
    }

    /// Σ c_n ψ_n on the mesh.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.domain.len()];
        for (c, p) in coeffs.iter().zip(&self.pairs) {
            if *c != 0.0 {
                for (o, v) in out.iter_mut().zip(&p.psi) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// Matrix of inner products `(ψ_m, ψ_n)` for the first `n` modes.
    pub fn gram(&self, n: usize) -> Vec<Vec<f64>> {
        let n = n.min(self.len());
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        crate::mesh::inner(&self.weights, &self.pairs[a].psi, &self.pairs[b].psi)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Discrete L² inner products of a sampled field with every mode.
pub fn project(field: &[f64], basis: &Spectrum) -> Result<Vec<f64>, SpectrumError> {
    basis.domain.check_field(field)?;
    let wf: Vec<f64> = field
        .iter()
        .zip(&basis.weights)
        .map(|(f, w)| f * w)
        .collect();
    let raw: Vec<f64> = basis
        .pairs
        .iter()
        .map(|p| p.psi.iter().zip(&wf).map(|(a, b)| a * b).sum())
        .collect();
    Ok(match &basis.gram_factor {
        Some((order, l)) => crate::linalg::cholesky_solve(l, *order, &raw),
        None => raw,
    })
}

/// Plain quadrature inner products `(field, ψ_n)` without the Gram solve.
pub fn inner_products(field: &[f64], basis: &Spectrum) -> Result<Vec<f64>, SpectrumError> {
    basis.domain.check_field(field)?;
    Ok(basis
        .pairs
        .iter()
        .map(|p| crate::mesh::inner(&basis.weights, &p.psi, field))
        .collect())
}

/// Truncated norm `(Σ |μ_n^γ c_n|²)^{1/2}`.
pub fn frac_power_norm(coeffs: &[f64], basis: &Spectrum, gamma: f64) -> Result<f64, SpectrumError> {
    if !(gamma >= 0.0) {
        return Err(SpectrumError::NegativeGamma(gamma));
    }
    if coeffs.len() != basis.len() {
        return Err(SpectrumError::CoefficientCount {
            expected: basis.len(),
            got: coeffs.len(),
        });
    }
    Ok(coeffs
        .iter()
        .zip(&basis.pairs)
        .map(|(c, p)| (p.mu.powf(gamma) * c).powi(2))
        .sum::<f64>()
        .sqrt())
}
