//! Time-fractional diffusion `∂^α_t u − Δu = f(x)g(t)` with Robin boundary
//! conditions: eigenfunction-expansion solver, finite-difference oracle,
//! and numerical checks of maximum principles and the Hopf lemma.
//!
//! The numerical kernels (`special`, `quadrature`, `linalg`,
//! `frac_calculus`, `mittag_leffler`) are generic over [`real::Real`]
//! (`f32`/`f64`); the solver layers work in `f64`.

// NaN-rejecting `!(x > 0)` guards and index loops over several arrays are intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod fd_oracle;
pub mod frac_calculus;
pub mod linalg;
pub mod mesh;
pub mod mittag_leffler;
pub mod principles;
pub mod problem;
pub mod quadrature;
pub mod real;
pub mod robin_spectrum;
pub mod spectral_solver;
pub mod special;

pub use frac_calculus::{FracOrder, TimeSeries};
pub use mesh::{BoundaryTrace, Domain, Face};
pub use mittag_leffler::{ml_eval, MlParams};
pub use problem::{BoundaryData, ProblemSpec, SpaceData, TimeFn};
pub use real::Real;
pub use robin_spectrum::{RobinCoefficient, Spectrum};
pub use spectral_solver::{solve, SolutionField};

pub type FracOrder64 = FracOrder<f64>;
pub type FracOrder32 = FracOrder<f32>;
pub type TimeSeries64 = TimeSeries<f64>;
pub type TimeSeries32 = TimeSeries<f32>;
pub type MlParams64 = MlParams<f64>;
pub type MlParams32 = MlParams<f32>;
