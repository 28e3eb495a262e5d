//! Independent finite-difference solver on intervals: L1 in time,
//! second-order centred differences in space with ghost-node Robin closure.
//!
//! Each step solves the symmetric tridiagonal system
//! `(c0 W + K) u^k = W F^k + r(b^k) + c0 W·(history)` with
//! `c0 = dt^{−α}/Γ(2−α)`, `K` the Robin stiffness and `W` the trapezoid
//! weights (see [`RobinStiffness`]).

use thiserror::Error;

use crate::linalg::solve_tridiagonal;
use crate::mesh::Domain;
use crate::problem::{BoundaryData, ProblemSpec, TimeFn};
use crate::quadrature::trapezoid_weights;
use crate::robin_spectrum::RobinStiffness;
use crate::spectral_solver::{elliptic_lift, FieldSource, SolutionField, SolverError};
use crate::special::gamma;

/// Minimum space and time resolution.
pub const FD_MIN_NODES: usize = 16;

#[derive(Debug, Error)]
pub enum FdError {
    #[error("finite-difference oracle needs an interval domain")]
    NotInterval,
    #[error("need at least {FD_MIN_NODES} space nodes and time steps, got J = {j}, K = {k}")]
    TooCoarse { j: usize, k: usize },
    #[error("config asks for {cfg} space nodes but the problem is sampled on {mesh}")]
    MeshMismatch { cfg: usize, mesh: usize },
    #[error("linear solve residual {residual:e} exceeds tolerance {tol:e} at step {step}")]
    Breakdown { step: usize, residual: f64, tol: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Oracle resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    /// Space nodes `J` (must match the problem mesh).
    pub space_nodes: usize,
    /// Time steps `K`.
    pub time_steps: usize,
    /// Accepted relative residual of each tridiagonal solve.
    pub solver_tol: f64,
}

impl FdConfig {
    pub fn new(space_nodes: usize, time_steps: usize) -> Self {
        Self {
            space_nodes,
            time_steps,
            solver_tol: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<(), FdError> {
        if self.space_nodes < FD_MIN_NODES || self.time_steps < FD_MIN_NODES {
            return Err(FdError::TooCoarse {
                j: self.space_nodes,
                k: self.time_steps,
            });
        }
        Ok(())
    }
}

struct Stepper<'a> {
    dom: &'a Domain,
    op: RobinStiffness,
    w: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    c0: f64,
    /// L1 weights `b_m = (m+1)^{1−α} − m^{1−α}`.
    b: Vec<f64>,
    tol: f64,
}

impl<'a> Stepper<'a> {
    fn new(spec: &'a ProblemSpec, steps: usize, tol: f64) -> Result<Self, FdError> {
        let dom = &spec.domain;
        let op = RobinStiffness::new(dom, &spec.lambda).map_err(SolverError::from)?;
        let (d, o) = op.tridiagonal().ok_or(FdError::NotInterval)?;
        let w = op.weights();
        let alpha = spec.alpha.alpha();
        let dt = spec.t_final / steps as f64;
        let c0 = dt.powf(-alpha) / gamma(2.0 - alpha);
        let diag = d.iter().zip(&w).map(|(d, w)| d + c0 * w).collect();
        let b = (0..steps)
            .map(|m| {
                if m == 0 {
                    1.0
                } else {
                    ((m + 1) as f64).powf(1.0 - alpha) - (m as f64).powf(1.0 - alpha)
                }
            })
            .collect();
        Ok(Self {
            dom,
            op,
            w,
            lower: o,
            diag,
            c0,
            b,
            tol,
        })
    }

    /// Time-major solution history for one data set.
    fn run(&self, u0: &[f64], f: &[f64], g: &TimeFn, bd: &BoundaryData, times: &[f64]) -> Result<Vec<Vec<f64>>, FdError> {
        let n = self.dom.len();
        let steps = times.len() - 1;
        let mut hist: Vec<Vec<f64>> = Vec::with_capacity(steps + 1);
        hist.push(u0.to_vec());
        // diffs[j] = u^{j+1} − u^j
        let mut diffs: Vec<Vec<f64>> = Vec::with_capacity(steps);
        let with_f = !g.is_zero() && f.iter().any(|v| *v != 0.0);
        for k in 1..=steps {
            let mut rhs = vec![0.0; n];
            let prev = &hist[k - 1];
            for i in 0..n {
                // c0 W (u^{k−1} − Σ_{j ≤ k−2} b_{k−1−j} (u^{j+1} − u^j))
                let mut h = prev[i];
                for (j, dj) in diffs.iter().enumerate() {
                    h -= self.b[k - 1 - j] * dj[i];
                }
                rhs[i] = self.c0 * self.w[i] * h;
            }
            if with_f {
                let gk = g.eval(times[k]);
                for i in 0..n {
                    rhs[i] += self.w[i] * f[i] * gk;
                }
            }
            if !bd.is_zero() {
                let load = self.op.boundary_load(&bd.trace(self.dom, times[k]));
                for i in 0..n {
                    rhs[i] += load[i];
                }
            }
            let u = solve_tridiagonal(&self.lower, &self.diag, &self.lower, &rhs).map_err(SolverError::from)?;
            self.check(&u, &rhs, k)?;
            diffs.push(u.iter().zip(prev).map(|(a, b)| a - b).collect());
            hist.push(u);
        }
        Ok(hist)
    }

    fn check(&self, u: &[f64], rhs: &[f64], step: usize) -> Result<(), FdError> {
        let n = u.len();
        let (mut r2, mut b2) = (0.0, 0.0);
        for i in 0..n {
            let mut v = self.diag[i] * u[i];
            if i > 0 {
                v += self.lower[i - 1] * u[i - 1];
            }
            if i + 1 < n {
                v += self.lower[i] * u[i + 1];
            }
            r2 += (v - rhs[i]).powi(2);
            b2 += rhs[i] * rhs[i];
        }
        let residual = if b2 > 0.0 { (r2 / b2).sqrt() } else { r2.sqrt() };
        if !(residual <= self.tol) {
            return Err(FdError::Breakdown {
                step,
                residual,
                tol: self.tol,
            });
        }
        Ok(())
    }
}

/// Solves the full problem on the problem mesh with `cfg.time_steps` steps.
///
/// The three parts are computed as separate runs (initial value only,
/// source only, boundary data only) so the field carries the same
/// `u1/u2/u3` split as the spectral solution.
pub fn solve_fd(spec: &ProblemSpec, cfg: &FdConfig) -> Result<SolutionField, FdError> {
    cfg.validate()?;
    if spec.domain.dim() != 1 {
        return Err(FdError::NotInterval);
    }
    if cfg.space_nodes != spec.domain.nx() {
        return Err(FdError::MeshMismatch {
            cfg: cfg.space_nodes,
            mesh: spec.domain.nx(),
        });
    }
    spec.validate().map_err(SolverError::from)?;
    let steps = cfg.time_steps;
    let stepper = Stepper::new(spec, steps, cfg.solver_tol)?;
    let times = spec.time_grid(steps);
    let n = spec.domain.len();
    let zeros = vec![0.0; n];
    let none = BoundaryData::zero();

    let part = |u0: &[f64], f: &[f64], g: &TimeFn, b: &BoundaryData, active: bool| {
        if active {
            stepper.run(u0, f, g, b, &times).map(Some)
        } else {
            Ok(None)
        }
    };
    let p1 = part(&spec.u0.values, &zeros, &TimeFn::zero(), &none, !spec.u0.is_zero())?;
    let p2 = part(&zeros, &spec.f, &spec.g, &none, spec.has_source())?;
    let p3 = part(&zeros, &zeros, &TimeFn::zero(), &spec.b, !spec.b.is_zero())?;

    let mut field = SolutionField::zeros(&spec.domain, spec.t_final, steps, FieldSource::FiniteDifference);
    for k in 0..=steps {
        let off = k * n;
        let lift = if spec.b.is_zero() {
            zeros.clone()
        } else {
            elliptic_lift(&spec.b.trace(&spec.domain, times[k]), &spec.lambda, &spec.domain)?
        };
        for i in 0..n {
            let a = p1.as_ref().map_or(0.0, |h| h[k][i]);
            let b = p2.as_ref().map_or(0.0, |h| h[k][i]);
            let c = p3.as_ref().map_or(0.0, |h| h[k][i]);
            field.u1[off + i] = a;
            field.u2[off + i] = b;
            field.u3[off + i] = c;
            field.lift[off + i] = lift[i];
            field.u[off + i] = a + b + c;
        }
    }
    Ok(field)
}

/// Error of one field against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareReport {
    pub abs_l2l2: f64,
    pub rel_l2l2: f64,
    pub abs_max: f64,
    pub rel_max: f64,
    /// Coarse grid used: `(time steps, space nodes)`.
    pub grid: (usize, usize),
}

fn ratio(fine: usize, coarse: usize) -> Option<usize> {
    // intervals nest when coarse−1 divides fine−1
    let (f, c) = (fine - 1, coarse - 1);
    (c > 0 && f % c == 0).then_some(f / c)
}

/// Compares `a` against the reference `b` after restriction to the
/// coarser of the two grids. Relative errors divide by the reference norm
/// (or report the absolute error when the reference vanishes).
pub fn compare(a: &SolutionField, b: &SolutionField) -> Result<CompareReport, SolverError> {
    let (da, db) = (&a.domain, &b.domain);
    if da.kind() != db.kind() || da.lengths() != db.lengths() {
        return Err(SolverError::NotNested("different geometry".into()));
    }
    if (a.t_final - b.t_final).abs() > 1e-12 * a.t_final.abs().max(1.0) {
        return Err(SolverError::NotNested("different final time".into()));
    }
    let coarse_dom = if da.len() <= db.len() { da } else { db };
    let axis = |x: &Domain, c: &Domain| -> Result<(usize, usize), SolverError> {
        let rx = ratio(x.nx(), c.nx()).ok_or_else(|| SolverError::NotNested(format!("x: {} vs {}", x.nx(), c.nx())))?;
        let ry = if x.dim() == 2 {
            ratio(x.ny(), c.ny()).ok_or_else(|| SolverError::NotNested(format!("y: {} vs {}", x.ny(), c.ny())))?
        } else {
            1
        };
        Ok((rx, ry))
    };
    let (ax, ay) = axis(da, coarse_dom)?;
    let (bx, by) = axis(db, coarse_dom)?;
    let steps = a.steps.min(b.steps);
    let ta = a.steps.is_multiple_of(steps)
        .then_some(a.steps / steps)
        .ok_or_else(|| SolverError::NotNested(format!("time steps {} vs {}", a.steps, b.steps)))?;
    let tb = b.steps.is_multiple_of(steps)
        .then_some(b.steps / steps)
        .ok_or_else(|| SolverError::NotNested(format!("time steps {} vs {}", a.steps, b.steps)))?;

    let w = coarse_dom.trapezoid_weights();
    let wt = trapezoid_weights(steps + 1, a.t_final / steps as f64);
    let (mut e2, mut r2, mut emax, mut rmax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..=steps {
        for p in 0..coarse_dom.len() {
            let (i, j) = coarse_dom.ij(p);
            let va = a.at(k * ta, da.index(i * ax, j * ay));
            let vb = b.at(k * tb, db.index(i * bx, j * by));
            let d = va - vb;
            e2 += wt[k] * w[p] * d * d;
            r2 += wt[k] * w[p] * vb * vb;
            emax = emax.max(d.abs());
            rmax = rmax.max(vb.abs());
        }
    }
    let (abs_l2l2, ref_l2l2) = (e2.sqrt(), r2.sqrt());
    Ok(CompareReport {
        abs_l2l2,
        rel_l2l2: if ref_l2l2 > 0.0 { abs_l2l2 / ref_l2l2 } else { abs_l2l2 },
        abs_max: emax,
        rel_max: if rmax > 0.0 { emax / rmax } else { emax },
        grid: (steps, coarse_dom.nx()),
    })
}
