//! Problem data for `∂^α_t u − Δu = f(x) g(t)` with
//! `∂u/∂ν + λu = b` on the boundary and `u(·, 0) = u0`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::frac_calculus::FracOrder;
use crate::mesh::{normal_derivative, BoundaryTrace, Domain, Face, MeshError};
use crate::robin_spectrum::{RobinCoefficient, SpectrumError};

/// Default tolerance for the compatibility condition.
pub const COMP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("final time must be positive and finite, got {0}")]
    Horizon(f64),
    #[error(
        "compatibility ∂u0/∂ν + λu0 = b(·,0) violated: measured mismatch {measured:e} exceeds tolerance {tol:e} at the {face} face"
    )]
    Compatibility {
        measured: f64,
        tol: f64,
        face: &'static str,
    },
    #[error("boundary data must vanish at t = 0 for the boundary subproblem: measured |b(·,0)| = {measured:e} > {tol:e}")]
    BoundaryStart { measured: f64, tol: f64 },
    #[error("{what} must vanish for this solve")]
    NonZeroData { what: &'static str },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// A scalar function of time.
#[derive(Clone)]
pub struct TimeFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    zero: bool,
}

impl TimeFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            zero: false,
        }
    }
    pub fn zero() -> Self {
        Self {
            f: Arc::new(|_| 0.0),
            zero: true,
        }
    }
    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self::new(move |_| c)
    }
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
    /// True only for functions built as identically zero.
    pub fn is_zero(&self) -> bool {
        self.zero
    }
    pub fn sample(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|t| self.eval(*t)).collect()
    }
}

impl fmt::Debug for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.zero { "TimeFn(0)" } else { "TimeFn(..)" })
    }
}

/// Boundary data `b(face, s, t)` with `s` the coordinate along the face.
#[derive(Clone)]
pub struct BoundaryData {
    f: Arc<dyn Fn(Face, f64, f64) -> f64 + Send + Sync>,
    zero: bool,
}

impl BoundaryData {
    pub fn new(f: impl Fn(Face, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            zero: false,
        }
    }
    pub fn zero() -> Self {
        Self {
            f: Arc::new(|_, _, _| 0.0),
            zero: true,
        }
    }
    /// `b(face, s, t) = space(face, s)·time(t)`.
    pub fn separable(space: impl Fn(Face, f64) -> f64 + Send + Sync + 'static, time: TimeFn) -> Self {
        if time.is_zero() {
            return Self::zero();
        }
        Self::new(move |face, s, t| space(face, s) * time.eval(t))
    }
    pub fn eval(&self, face: Face, s: f64, t: f64) -> f64 {
        (self.f)(face, s, t)
    }
    pub fn is_zero(&self) -> bool {
        self.zero
    }
    pub fn trace(&self, dom: &Domain, t: f64) -> BoundaryTrace {
        BoundaryTrace::from_fn(dom, |face, s| self.eval(face, s, t))
    }
    pub fn sum(&self, other: &BoundaryData) -> BoundaryData {
        if self.zero {
            return other.clone();
        }
        if other.zero {
            return self.clone();
        }
        let (a, b) = (self.clone(), other.clone());
        Self::new(move |face, s, t| a.eval(face, s, t) + b.eval(face, s, t))
    }
    pub fn scaled(&self, c: f64) -> BoundaryData {
        if self.zero || c == 0.0 {
            return Self::zero();
        }
        let a = self.clone();
        Self::new(move |face, s, t| c * a.eval(face, s, t))
    }
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.zero { "BoundaryData(0)" } else { "BoundaryData(..)" })
    }
}

/// A sampled field, optionally with its exact outward normal derivative on
/// the boundary (used for the compatibility check).
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceData {
    pub values: Vec<f64>,
    pub normal_derivative: Option<BoundaryTrace>,
}

impl SpaceData {
    pub fn zeros(dom: &Domain) -> Self {
        Self {
            values: vec![0.0; dom.len()],
            normal_derivative: Some(BoundaryTrace::zeros(dom)),
        }
    }
    pub fn sampled(values: Vec<f64>) -> Self {
        Self {
            values,
            normal_derivative: None,
        }
    }
    pub fn with_flux(values: Vec<f64>, normal_derivative: BoundaryTrace) -> Self {
        Self {
            values,
            normal_derivative: Some(normal_derivative),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
            normal_derivative: self
                .normal_derivative
                .as_ref()
                .map(|n| n.map2(n, |a, _| c * a)),
        }
    }
    pub fn add(&self, other: &SpaceData) -> Self {
        Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            normal_derivative: match (&self.normal_derivative, &other.normal_derivative) {
                (Some(a), Some(b)) => Some(a.axpy(1.0, b)),
                _ => None,
            },
        }
    }
}

/// Full problem description.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: FracOrder,
    pub t_final: f64,
    pub domain: Domain,
    pub lambda: RobinCoefficient,
    pub u0: SpaceData,
    pub f: Vec<f64>,
    pub g: TimeFn,
    pub b: BoundaryData,
    pub comp_tol: f64,
    /// When false the compatibility condition is reported but not enforced.
    pub enforce_compatibility: bool,
}

impl ProblemSpec {
    /// Problem with zero data.
    pub fn new(alpha: FracOrder, t_final: f64, domain: Domain, lambda: RobinCoefficient) -> Self {
        Self {
            alpha,
            t_final,
            u0: SpaceData::zeros(&domain),
            f: vec![0.0; domain.len()],
            g: TimeFn::zero(),
            b: BoundaryData::zero(),
            domain,
            lambda,
            comp_tol: COMP_TOL,
            enforce_compatibility: true,
        }
    }

    pub fn with_initial(mut self, u0: SpaceData) -> Self {
        self.u0 = u0;
        self
    }
    pub fn with_source(mut self, f: Vec<f64>, g: TimeFn) -> Self {
        self.f = f;
        self.g = g;
        self
    }
    pub fn with_boundary(mut self, b: BoundaryData) -> Self {
        self.b = b;
        self
    }
    pub fn with_compatibility(mut self, enforce: bool) -> Self {
        self.enforce_compatibility = enforce;
        self
    }

    pub fn has_source(&self) -> bool {
        !self.g.is_zero() && self.f.iter().any(|v| *v != 0.0)
    }

    /// Uniform time grid with `steps` steps (`steps + 1` nodes).
    pub fn time_grid(&self, steps: usize) -> Vec<f64> {
        let dt = self.t_final / steps as f64;
        (0..=steps).map(|k| k as f64 * dt).collect()
    }

    /// Largest compatibility mismatch `|∂u0/∂ν + λu0 − b(·,0)|`, the face
    /// where it occurs, and the tolerance it must meet.
    ///
    /// With an exact normal derivative the tolerance is `comp_tol` relative
    /// to the data scale; with only samples, the one-sided difference error
    /// (estimated from third differences) is added to it.
    pub fn compatibility_mismatch(&self) -> (f64, &'static str, f64) {
        let dom = &self.domain;
        let lam = self.lambda.trace(dom);
        let u0b = BoundaryTrace::of_field(dom, &self.u0.values);
        let b0 = self.b.trace(dom, 0.0);
        let (flux, allowance) = match &self.u0.normal_derivative {
            Some(n) => (n.clone(), 0.0),
            None => (normal_derivative(dom, &self.u0.values), fd_flux_allowance(dom, &self.u0.values)),
        };
        let lam_u0 = lam.map2(&u0b, |l, u| l * u);
        let scale = 1.0f64.max(b0.max_abs()).max(lam_u0.max_abs()).max(flux.max_abs());
        let mut worst = (0.0f64, "left");
        for &face in dom.faces() {
            for ((n, lu), b) in flux.face(face).iter().zip(lam_u0.face(face)).zip(b0.face(face)) {
                let m = (n + lu - b).abs();
                if m > worst.0 {
                    worst = (m, face.name());
                }
            }
        }
        (worst.0, worst.1, self.comp_tol * scale + allowance)
    }

    /// Validates the problem; compatibility only when enforced.
    pub fn validate(&self) -> Result<(), ProblemError> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(ProblemError::Horizon(self.t_final));
        }
        self.lambda.validate(&self.domain)?;
        self.domain.check_field(&self.u0.values)?;
        self.domain.check_field(&self.f)?;
        if self.enforce_compatibility {
            let (measured, face, tol) = self.compatibility_mismatch();
            if measured > tol {
                return Err(ProblemError::Compatibility { measured, tol, face });
            }
        }
        Ok(())
    }
}

fn fd_flux_allowance(dom: &Domain, u: &[f64]) -> f64 {
    // one-sided second-order derivative error ≈ h²|u'''|/3 ≈ |Δ³u|/(3h)
    let mut worst = 0.0f64;
    for &face in dom.faces() {
        for s in 0..dom.face_len(face) {
            let (idx, step, h) = match face {
                Face::Left => (dom.face_node(face, s) as isize, 1isize, dom.hx()),
                Face::Right => (dom.face_node(face, s) as isize, -1, dom.hx()),
                Face::Bottom => (dom.face_node(face, s) as isize, dom.nx() as isize, dom.hy()),
                Face::Top => (dom.face_node(face, s) as isize, -(dom.nx() as isize), dom.hy()),
            };
            let at = |m: isize| u[(idx + m * step) as usize];
            let d3 = at(3) - 3.0 * at(2) + 3.0 * at(1) - at(0);
            worst = worst.max(d3.abs() / (3.0 * h));
        }
    }
    2.0 * worst
}
