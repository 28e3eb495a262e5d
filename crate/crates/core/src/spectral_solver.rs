//! Eigenfunction-expansion solver.
//!
//! The solution is assembled as `u = u1 + u2 + u3` with
//!
//! * `u1 = Σ u0_n E_{α,1}(−μ_n t^α) ψ_n`,
//! * `u2 = Σ f_n g_n(t) ψ_n`, `g_n(t) = ∫_0^t g(t−τ) τ^{α−1} E_{α,α}(−μ_n τ^α) dτ`,
//! * `u3 = Λ_b(t) − Σ c_n(0) E_{α,1}(−μ_n t^α) ψ_n + Σ z_n(t) ψ_n`,
//!   `z_n(t) = −∫_0^t c_n'(τ) E_{α,1}(−μ_n (t−τ)^α) dτ`,
//!
//! where `Λ_b(·, t)` is the harmonic Robin lift of the boundary data and
//! `c_n(t) = (Λ_b(·, t), ψ_n)`. When `b(·, 0) = 0` the middle term of `u3`
//! vanishes and `u3 = z_c + Λ_b`.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::frac_calculus::{caputo_left, FracError, FracOrder, TimeSeries};
use crate::linalg::{conjugate_gradient, LinalgError};
use crate::mesh::{normal_derivative, BoundaryTrace, Domain, Face, MeshError};
use crate::mittag_leffler::{relaxation, relaxation_integral, MlError};
use crate::problem::{ProblemError, ProblemSpec};
use crate::quadrature::trapezoid_weights;
use crate::robin_spectrum::cache::compute;
use crate::robin_spectrum::{
    frac_power_norm, project, RobinCoefficient, RobinStiffness, Spectrum, SpectrumError,
    SpectrumMethod,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("basis does not match the problem: {0}")]
    BasisMismatch(String),
    #[error("eigenvalue μ_{n} = {mu} must be positive")]
    NonPositiveMu { n: usize, mu: f64 },
    #[error("need at least one time step")]
    NoSteps,
    #[error("lift solve did not converge (relative residual {0:e})")]
    Lift(f64),
    #[error("fields are not on nested grids: {0}")]
    NotNested(String),
}

/// Where a field came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSource {
    Spectral,
    FiniteDifference,
}

/// Truncation indicators reported with a spectral solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TruncationReport {
    /// `‖tail‖/‖all‖` of the modal coefficients of `u0 − Λ_b(·,0)` over
    /// the upper half of the retained modes.
    pub u0_tail: f64,
    /// Same for `f`.
    pub f_tail: f64,
    /// `‖u(·,0) − u0‖ / max(‖u0‖, 1)` in the discrete L² norm.
    pub initial_error: f64,
}

/// Space-time field on a uniform time grid. Arrays are time-major:
/// entry `k·P + p` is time node `k`, mesh node `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub domain: Domain,
    pub t_final: f64,
    pub steps: usize,
    pub u: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub u3: Vec<f64>,
    pub lift: Vec<f64>,
    pub modes_used: usize,
    pub source: FieldSource,
    pub truncation: TruncationReport,
}

/// Component selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    U1,
    U2,
    U3,
    Lift,
}

impl SolutionField {
    pub(crate) fn zeros(domain: &Domain, t_final: f64, steps: usize, source: FieldSource) -> Self {
        let n = domain.len() * (steps + 1);
        Self {
            domain: domain.clone(),
            t_final,
            steps,
            u: vec![0.0; n],
            u1: vec![0.0; n],
            u2: vec![0.0; n],
            u3: vec![0.0; n],
            lift: vec![0.0; n],
            modes_used: 0,
            source,
            truncation: TruncationReport::default(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }
    pub fn n_times(&self) -> usize {
        self.steps + 1
    }
    pub fn n_points(&self) -> usize {
        self.domain.len()
    }
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }
    pub fn times(&self) -> Vec<f64> {
        (0..self.n_times()).map(|k| self.time(k)).collect()
    }

    pub fn component(&self, c: Component) -> &[f64] {
        match c {
            Component::U => &self.u,
            Component::U1 => &self.u1,
            Component::U2 => &self.u2,
            Component::U3 => &self.u3,
            Component::Lift => &self.lift,
        }
    }

    /// `u(·, t_k)`.
    pub fn slice(&self, k: usize) -> &[f64] {
        self.slice_of(Component::U, k)
    }
    pub fn slice_of(&self, c: Component, k: usize) -> &[f64] {
        let p = self.n_points();
        &self.component(c)[k * p..(k + 1) * p]
    }

    /// `t ↦ u(x_p, t)`.
    pub fn trace(&self, p: usize) -> TimeSeries {
        let n = self.n_points();
        let v = (0..self.n_times()).map(|k| self.u[k * n + p]).collect();
        TimeSeries::new(0.0, self.dt(), v).expect("valid grid")
    }

    pub fn at(&self, k: usize, p: usize) -> f64 {
        self.u[k * self.n_points() + p]
    }

    /// `(k, p, value)` of the smallest sample of `u`.
    pub fn argmin(&self) -> (usize, usize, f64) {
        let (i, v) = self
            .u
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
        (i / self.n_points(), i % self.n_points(), v)
    }
    pub fn argmax(&self) -> (usize, usize, f64) {
        let (i, v) = self
            .u
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
        (i / self.n_points(), i % self.n_points(), v)
    }
    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Discrete `L²(Ω)` norm of `u(·, t_k)` with trapezoid weights.
    pub fn l2_at(&self, k: usize) -> f64 {
        crate::mesh::norm(&self.domain.trapezoid_weights(), self.slice(k))
    }

    /// Discrete `L²(0,T; L²(Ω))` norm (trapezoid in space and time).
    pub fn l2l2(&self) -> f64 {
        let wt = trapezoid_weights(self.n_times(), self.dt());
        (0..self.n_times())
            .map(|k| wt[k] * self.l2_at(k).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `sup_t ‖u(·, t)‖_{L²}` over the grid.
    pub fn sup_l2(&self) -> f64 {
        (0..self.n_times()).map(|k| self.l2_at(k)).fold(0.0, f64::max)
    }

    /// `(1 − θ)·self + θ·other`-style combination: `a·self + c·other`.
    pub fn combine(&self, a: f64, other: &SolutionField, c: f64) -> SolutionField {
        let mix = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(x, y)| a * x + c * y).collect();
        SolutionField {
            u: mix(&self.u, &other.u),
            u1: mix(&self.u1, &other.u1),
            u2: mix(&self.u2, &other.u2),
            u3: mix(&self.u3, &other.u3),
            lift: mix(&self.lift, &other.lift),
            ..self.clone()
        }
    }
}

// ---------------------------------------------------------------- lift

/// Harmonic Robin lift `−ΔΛ = 0`, `∂Λ/∂ν + λΛ = b` for one boundary trace.
///
/// Exact affine solution on an interval; on a rectangle the discrete
/// harmonic system `KΛ = r(b)` of [`RobinStiffness`] solved by CG.
pub fn elliptic_lift(bt: &BoundaryTrace, lam: &RobinCoefficient, dom: &Domain) -> Result<Vec<f64>, SolverError> {
    lam.validate(dom)?;
    if bt.max_abs() == 0.0 {
        return Ok(vec![0.0; dom.len()]);
    }
    if dom.dim() == 1 {
        let lt = lam.trace(dom);
        let (ll, lr) = (lt.left[0], lt.right[0]);
        let length = dom.lengths()[0];
        // [λl, −1; λr, 1 + λr L] [a; c] = [bl; br]
        let det = ll * (1.0 + lr * length) + lr;
        let (bl, br) = (bt.left[0], bt.right[0]);
        let a = (bl * (1.0 + lr * length) + br) / det;
        let c = (ll * br - lr * bl) / det;
        return Ok((0..dom.nx()).map(|i| a + c * dom.x(i)).collect());
    }
    let op = RobinStiffness::new(dom, lam)?;
    let rhs = op.boundary_load(bt);
    let sol = conjugate_gradient(|x, y| op.apply(x, y), &rhs, 1e-13, 20 * dom.len())?;
    if !(sol.relative_residual <= 1e-10) {
        return Err(SolverError::Lift(sol.relative_residual));
    }
    Ok(sol.x)
}

// ------------------------------------------------------- kernel tables

/// `g_n(t_k)` for every mode (mode-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceKernelTable {
    pub dt: f64,
    pub values: Vec<Vec<f64>>,
}

impl SourceKernelTable {
    /// Largest excess of `|g_n(t)|` over `‖g‖_∞·min(t^α/Γ(1+α), 1/μ_n)`.
    pub fn bound_violation(&self, g_sup: f64, mus: &[f64], a: FracOrder) -> f64 {
        let alpha = a.alpha();
        let ga = crate::special::gamma(1.0 + alpha);
        let mut worst = f64::NEG_INFINITY;
        for (row, mu) in self.values.iter().zip(mus) {
            for (k, v) in row.iter().enumerate() {
                let t = k as f64 * self.dt;
                let bound = g_sup * (t.powf(alpha) / ga).min(1.0 / mu);
                worst = worst.max(v.abs() - bound);
            }
        }
        worst
    }
}

fn relaxation_row(a: FracOrder, mu: f64, dt: f64, steps: usize) -> Result<Vec<f64>, MlError> {
    (0..=steps).map(|k| relaxation(a, mu, k as f64 * dt)).collect()
}

fn kernel_row(e: &[f64], g: &[f64], mu: f64) -> Vec<f64> {
    // g(t_k − τ) ≈ mean of the two node values on each step; the kernel is
    // integrated exactly: ∫ τ^{α−1}E_{α,α}(−μτ^α) = [E(τ_j) − E(τ_{j+1})]/μ
    let n = g.len();
    let w: Vec<f64> = (0..n.saturating_sub(1)).map(|j| (e[j] - e[j + 1]) / mu).collect();
    let gm: Vec<f64> = g.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let mut out = vec![0.0; n];
    for k in 1..n {
        let mut acc = 0.0;
        for j in 0..k {
            // step [τ_j, τ_{j+1}] ↔ g on [t_{k−j−1}, t_{k−j}]
            acc += w[j] * gm[k - j - 1];
        }
        out[k] = acc;
    }
    out
}

fn check_mus(mus: &[f64]) -> Result<(), SolverError> {
    for (i, mu) in mus.iter().enumerate() {
        if !(*mu > 0.0) {
            return Err(SolverError::NonPositiveMu { n: i + 1, mu: *mu });
        }
    }
    Ok(())
}

/// Product-integration table of `g_n(t_k)` for `g` sampled on a uniform
/// grid starting at 0.
pub fn source_kernel_table(g: &TimeSeries, mus: &[f64], a: FracOrder) -> Result<SourceKernelTable, SolverError> {
    check_mus(mus)?;
    let steps = g.len() - 1;
    let values = mus
        .par_iter()
        .map(|&mu| {
            let e = relaxation_row(a, mu, g.dt(), steps)?;
            Ok(kernel_row(&e, g.values(), mu))
        })
        .collect::<Result<Vec<_>, MlError>>()?;
    Ok(SourceKernelTable { dt: g.dt(), values })
}

// -------------------------------------------------------------- solves

fn check_basis(spec: &ProblemSpec, basis: &Spectrum) -> Result<(), SolverError> {
    if basis.domain != spec.domain {
        return Err(SolverError::BasisMismatch("mesh differs".into()));
    }
    let (a, b) = (basis.lambda.trace(&spec.domain), spec.lambda.trace(&spec.domain));
    if a.axpy(-1.0, &b).max_abs() > 1e-12 * (1.0 + b.max_abs()) {
        return Err(SolverError::BasisMismatch("Robin coefficient differs".into()));
    }
    if basis.is_empty() {
        return Err(SpectrumError::NoModes.into());
    }
    check_mus(&basis.mus())
}

fn tail_ratio(coeffs: &[f64], basis: &Spectrum) -> Result<f64, SpectrumError> {
    let all = frac_power_norm(coeffs, basis, 0.0)?;
    if all == 0.0 {
        return Ok(0.0);
    }
    let half = coeffs.len() / 2;
    let tail: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i < half { 0.0 } else { *c })
        .collect();
    Ok(frac_power_norm(&tail, basis, 0.0)? / all)
}

/// Which parts of the superposition to assemble.
#[derive(Debug, Clone, Copy)]
struct Parts {
    homogeneous: bool,
    boundary: bool,
}

/// Lifts at every time node, time-major.
fn lifts(spec: &ProblemSpec, steps: usize) -> Result<Vec<Vec<f64>>, SolverError> {
    let dom = &spec.domain;
    if spec.b.is_zero() {
        return Ok(vec![vec![0.0; dom.len()]; steps + 1]);
    }
    spec.time_grid(steps)
        .par_iter()
        .map(|t| elliptic_lift(&spec.b.trace(dom, *t), &spec.lambda, dom))
        .collect()
}

fn assemble(spec: &ProblemSpec, basis: &Spectrum, steps: usize, parts: Parts) -> Result<SolutionField, SolverError> {
    if steps == 0 {
        return Err(SolverError::NoSteps);
    }
    check_basis(spec, basis)?;
    let dom = &spec.domain;
    let a = spec.alpha;
    let dt = spec.t_final / steps as f64;
    let times = spec.time_grid(steps);
    let n_modes = basis.len();
    let mus = basis.mus();
    let np = dom.len();

    let use_u0 = parts.homogeneous && !spec.u0.is_zero();
    let use_f = parts.homogeneous && spec.has_source();
    let use_b = parts.boundary && !spec.b.is_zero();

    let u0n = if use_u0 { project(&spec.u0.values, basis)? } else { vec![0.0; n_modes] };
    let fnc = if use_f { project(&spec.f, basis)? } else { vec![0.0; n_modes] };
    let gs = spec.g.sample(&times);
    let lift = if use_b { lifts(spec, steps)? } else { vec![vec![0.0; np]; steps + 1] };
    let cn: Vec<Vec<f64>> = if use_b {
        lift.par_iter().map(|l| project(l, basis)).collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    // per-mode modal histories of u1, u2, u3 (excluding the lift itself)
    let modal: Vec<[Vec<f64>; 3]> = (0..n_modes)
        .into_par_iter()
        .map(|n| -> Result<[Vec<f64>; 3], MlError> {
            let mu = mus[n];
            let need_e = use_u0 || use_f || use_b;
            let e = if need_e { relaxation_row(a, mu, dt, steps)? } else { vec![0.0; steps + 1] };
            let m1: Vec<f64> = e.iter().map(|v| u0n[n] * v).collect();
            let m2 = if use_f {
                kernel_row(&e, &gs, mu).into_iter().map(|v| fnc[n] * v).collect()
            } else {
                vec![0.0; steps + 1]
            };
            let m3 = if use_b {
                let c: Vec<f64> = cn.iter().map(|row| row[n]).collect();
                let slope: Vec<f64> = c.windows(2).map(|w| (w[1] - w[0]) / dt).collect();
                // F(m dt) = ∫_0^{m dt} E_{α,1}(−μ r^α) dr
                let big_f = (0..=steps)
                    .map(|m| relaxation_integral(a, mu, m as f64 * dt))
                    .collect::<Result<Vec<_>, _>>()?;
                let w: Vec<f64> = big_f.windows(2).map(|p| p[1] - p[0]).collect();
                (0..=steps)
                    .map(|k| {
                        let z: f64 = (0..k).map(|j| slope[j] * w[k - 1 - j]).sum();
                        -z - c[0] * e[k]
                    })
                    .collect()
            } else {
                vec![0.0; steps + 1]
            };
            Ok([m1, m2, m3])
        })
        .collect::<Result<_, _>>()?;

    let mut field = SolutionField::zeros(dom, spec.t_final, steps, FieldSource::Spectral);
    field.modes_used = n_modes;
    let synth = |which: usize, k: usize| -> Vec<f64> {
        let coeffs: Vec<f64> = modal.iter().map(|m| m[which][k]).collect();
        basis.synthesize(&coeffs)
    };
    let slices: Vec<[Vec<f64>; 3]> = (0..=steps)
        .into_par_iter()
        .map(|k| [synth(0, k), synth(1, k), synth(2, k)])
        .collect();
    for (k, [s1, s2, s3]) in slices.into_iter().enumerate() {
        let off = k * np;
        let l = &lift[k];
        for p in 0..np {
            let v3 = s3[p] + l[p];
            field.u1[off + p] = s1[p];
            field.u2[off + p] = s2[p];
            field.u3[off + p] = v3;
            field.lift[off + p] = l[p];
            field.u[off + p] = s1[p] + s2[p] + v3;
        }
    }

    let mut tr = TruncationReport::default();
    if parts.homogeneous {
        let rest: Vec<f64> = match cn.first() {
            Some(c0) => u0n.iter().zip(c0).map(|(u, c)| u - c).collect(),
            None => u0n.clone(),
        };
        tr.u0_tail = tail_ratio(&rest, basis)?;
        tr.f_tail = tail_ratio(&fnc, basis)?;
        let w = dom.trapezoid_weights();
        let diff: Vec<f64> = field.slice(0).iter().zip(&spec.u0.values).map(|(a, b)| a - b).collect();
        tr.initial_error = crate::mesh::norm(&w, &diff) / crate::mesh::norm(&w, &spec.u0.values).max(1.0);
    }
    field.truncation = tr;
    Ok(field)
}

/// Solution with homogeneous boundary data: `u = u1 + u2`.
pub fn solve_homog_bc(spec: &ProblemSpec, basis: &Spectrum, steps: usize) -> Result<SolutionField, SolverError> {
    if !spec.b.is_zero() {
        return Err(ProblemError::NonZeroData { what: "boundary data b" }.into());
    }
    spec.validate()?;
    assemble(
        spec,
        basis,
        steps,
        Parts {
            homogeneous: true,
            boundary: false,
        },
    )
}

/// Boundary-driven part `u3 = z_c + Λ_b` for data with `b(·, 0) = 0`
/// (initial value and source are ignored).
pub fn solve_boundary(spec: &ProblemSpec, basis: &Spectrum, steps: usize) -> Result<SolutionField, SolverError> {
    let b0 = spec.b.trace(&spec.domain, 0.0).max_abs();
    if b0 > spec.comp_tol {
        return Err(ProblemError::BoundaryStart {
            measured: b0,
            tol: spec.comp_tol,
        }
        .into());
    }
    spec.lambda.validate(&spec.domain)?;
    assemble(
        spec,
        basis,
        steps,
        Parts {
            homogeneous: false,
            boundary: true,
        },
    )
}

/// Full solution `u1 + u2 + u3` on `steps` uniform time steps.
pub fn solve(spec: &ProblemSpec, basis: &Spectrum, steps: usize) -> Result<SolutionField, SolverError> {
    spec.validate()?;
    assemble(
        spec,
        basis,
        steps,
        Parts {
            homogeneous: true,
            boundary: true,
        },
    )
}

/// Basis of `n` modes for a problem: analytic when λ is constant per face,
/// finite-difference otherwise.
pub fn default_basis(spec: &ProblemSpec, n: usize) -> Result<Spectrum, SolverError> {
    let method = if spec.lambda.is_piecewise_constant(&spec.domain) {
        SpectrumMethod::Analytic
    } else {
        SpectrumMethod::FiniteDifference
    };
    Ok(compute(&spec.domain, &spec.lambda, n, method)?)
}

// ------------------------------------------------------------ residual

/// Residuals of a field against the equation and boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub interior_max: f64,
    pub interior_l2: f64,
    pub boundary_max: f64,
    pub boundary_l2: f64,
}

fn laplacian_at(dom: &Domain, u: &[f64], p: usize) -> f64 {
    let nx = dom.nx();
    let hx2 = dom.hx() * dom.hx();
    let mut v = (u[p - 1] - 2.0 * u[p] + u[p + 1]) / hx2;
    if dom.dim() == 2 {
        let hy2 = dom.hy() * dom.hy();
        v += (u[p - nx] - 2.0 * u[p] + u[p + nx]) / hy2;
    }
    v
}

/// Interior residual `L1-Caputo(u) − Δ_h u − f g` at interior nodes and
/// boundary residual `∂_ν u + λu − b` (one-sided normal differences), both
/// over time nodes `k ≥ 1`, in max and discrete `L²(0,T; L²)` norms.
pub fn residual(field: &SolutionField, spec: &ProblemSpec) -> Result<ResidualReport, SolverError> {
    let dom = &field.domain;
    if *dom != spec.domain {
        return Err(SolverError::BasisMismatch("field mesh differs from problem mesh".into()));
    }
    let np = dom.len();
    let dt = field.dt();
    let times = field.times();
    let gs = spec.g.sample(&times);
    let w = dom.trapezoid_weights();
    let interior: Vec<usize> = (0..np).filter(|p| !dom.is_boundary(*p)).collect();

    let per_node = interior
        .par_iter()
        .map(|&p| -> Result<(f64, f64), SolverError> {
            let cap = caputo_left(&field.trace(p), spec.alpha)?;
            let (mut mx, mut l2) = (0.0f64, 0.0f64);
            for k in 1..field.n_times() {
                let lap = laplacian_at(dom, field.slice(k), p);
                let r = cap.values()[k] - lap - spec.f[p] * gs[k];
                mx = mx.max(r.abs());
                l2 += dt * w[p] * r * r;
            }
            Ok((mx, l2))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let interior_max = per_node.iter().fold(0.0f64, |a, v| a.max(v.0));
    let interior_l2 = per_node.iter().map(|v| v.1).sum::<f64>().sqrt();

    let lam = spec.lambda.trace(dom);
    let (mut bmax, mut bl2) = (0.0f64, 0.0f64);
    for k in 1..field.n_times() {
        let u = field.slice(k);
        let dn = normal_derivative(dom, u);
        let ub = BoundaryTrace::of_field(dom, u);
        let b = spec.b.trace(dom, times[k]);
        for &face in dom.faces() {
            let fw = face_weights(dom, face);
            for (s, ((d, l), (uu, bb))) in dn
                .face(face)
                .iter()
                .zip(lam.face(face))
                .zip(ub.face(face).iter().zip(b.face(face)))
                .enumerate()
            {
                let r = d + l * uu - bb;
                bmax = bmax.max(r.abs());
                bl2 += dt * fw[s] * r * r;
            }
        }
    }
    Ok(ResidualReport {
        interior_max,
        interior_l2,
        boundary_max: bmax,
        boundary_l2: bl2.sqrt(),
    })
}

fn face_weights(dom: &Domain, face: Face) -> Vec<f64> {
    match (dom.dim(), face) {
        (1, _) => vec![1.0],
        (_, Face::Left | Face::Right) => trapezoid_weights(dom.ny(), dom.hy()),
        _ => trapezoid_weights(dom.nx(), dom.hx()),
    }
}

// ------------------------------------------------------------- output

/// Writes the field CSV (`# fracrobin-field v1`), one row per
/// (time, node), time-major. Extra header lines are written as comments.
pub fn write_field_csv<W: Write>(field: &SolutionField, header: &[String], mut w: W) -> io::Result<()> {
    writeln!(w, "# fracrobin-field v1")?;
    for h in header {
        writeln!(w, "# {h}")?;
    }
    let dom = &field.domain;
    if dom.dim() == 1 {
        writeln!(w, "t,x,u,u1,u2,u3,lift")?;
    } else {
        writeln!(w, "t,x,y,u,u1,u2,u3,lift")?;
    }
    let np = dom.len();
    for k in 0..field.n_times() {
        let t = field.time(k);
        for p in 0..np {
            let i = k * np + p;
            let pt = dom.point(p);
            write!(w, "{t:.16e},{:.16e},", pt[0])?;
            if dom.dim() == 2 {
                write!(w, "{:.16e},", pt[1])?;
            }
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                field.u[i], field.u1[i], field.u2[i], field.u3[i], field.lift[i]
            )?;
        }
    }
    Ok(())
}
