//! Named analytic samplers used to build problems from text selectors.
//!
//! Space selectors: `zero`, `const:c`, `mode:n[,amp]`, `bump:c,w,h` (1D) or
//! `bump:cx,cy,w,h` (2D), `poly:c0,c1,...` (polynomial in x), `lift`
//! (harmonic lift of `b(·,0)`). Time selectors: `zero`, `const:c`,
//! `linear:r`, `ramp:t1`, `smoothstep:t1`, `sin:ω`, `cos:ω`, `decay:r`,
//! `power:p`. Lists of selectors are summed.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::frac_calculus::{FracError, FracOrder};
use crate::mesh::{BoundaryTrace, Domain, Face};
use crate::problem::{BoundaryData, ProblemSpec, SpaceData, TimeFn};
use crate::robin_spectrum::{RobinCoefficient, Spectrum, SpectrumError};
use crate::spectral_solver::elliptic_lift;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown sampler `{0}`")]
    Unknown(String),
    #[error("bad arguments for `{name}`: {reason}")]
    Arguments { name: String, reason: String },
    #[error("`{0}` needs an eigenbasis")]
    NeedsBasis(String),
    #[error("mode {n} requested but the basis has {available} modes")]
    ModeOutOfRange { n: usize, available: usize },
    #[error("`{0}` cannot be used as boundary data")]
    NotAFaceProfile(String),
    #[error("lift failed: {0}")]
    Lift(String),
}

fn numbers(name: &str, args: &str) -> Result<Vec<f64>, CatalogError> {
    if args.trim().is_empty() {
        return Ok(Vec::new());
    }
    args.split(',')
        .map(|a| {
            a.trim().parse::<f64>().map_err(|e| CatalogError::Arguments {
                name: name.to_string(),
                reason: format!("`{a}`: {e}"),
            })
        })
        .collect()
}

fn arity(name: &str, got: usize, allowed: &[usize]) -> Result<(), CatalogError> {
    if allowed.contains(&got) {
        Ok(())
    } else {
        Err(CatalogError::Arguments {
            name: name.to_string(),
            reason: format!("expected {allowed:?} numbers, got {got}"),
        })
    }
}

/// A spatial sampler.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceProfile {
    Zero,
    Const(f64),
    Mode { n: usize, amp: f64 },
    /// Smooth compactly supported bump `h·exp(1 − 1/(1 − r²))`, `r = |x − c|/w`.
    Bump { center: Vec<f64>, width: f64, height: f64 },
    Poly(Vec<f64>),
    Lift,
}

impl FromStr for SpaceProfile {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let v = numbers(name, args)?;
        match name {
            "zero" => arity(name, v.len(), &[0]).map(|_| SpaceProfile::Zero),
            "lift" => arity(name, v.len(), &[0]).map(|_| SpaceProfile::Lift),
            "const" => arity(name, v.len(), &[1]).map(|_| SpaceProfile::Const(v[0])),
            "mode" => {
                arity(name, v.len(), &[1, 2])?;
                if v[0] < 1.0 || v[0].fract() != 0.0 {
                    return Err(CatalogError::Arguments {
                        name: name.into(),
                        reason: "mode index must be a positive integer".into(),
                    });
                }
                Ok(SpaceProfile::Mode {
                    n: v[0] as usize,
                    amp: v.get(1).copied().unwrap_or(1.0),
                })
            }
            "bump" => {
                arity(name, v.len(), &[3, 4])?;
                let k = v.len() - 2;
                if !(v[k] > 0.0) {
                    return Err(CatalogError::Arguments {
                        name: name.into(),
                        reason: "width must be positive".into(),
                    });
                }
                Ok(SpaceProfile::Bump {
                    center: v[..k].to_vec(),
                    width: v[k],
                    height: v[k + 1],
                })
            }
            "poly" => {
                if v.is_empty() {
                    return Err(CatalogError::Arguments {
                        name: name.into(),
                        reason: "needs at least one coefficient".into(),
                    });
                }
                Ok(SpaceProfile::Poly(v))
            }
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for SpaceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SpaceProfile::Zero => write!(f, "zero"),
            SpaceProfile::Lift => write!(f, "lift"),
            SpaceProfile::Const(c) => write!(f, "const:{c}"),
            SpaceProfile::Mode { n, amp } => write!(f, "mode:{n},{amp}"),
            SpaceProfile::Bump { center, width, height } => {
                write!(f, "bump:{},{width},{height}", join(center))
            }
            SpaceProfile::Poly(c) => write!(f, "poly:{}", join(c)),
        }
    }
}

fn bump(r2: f64) -> (f64, f64) {
    // value and d/d(r²) of exp(1 − 1/(1 − r²))
    if r2 >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - r2;
    let v = (1.0 - 1.0 / q).exp();
    (v, -v / (q * q))
}

impl SpaceProfile {
    /// Value and gradient at a point, for the closed-form samplers.
    fn eval(&self, p: [f64; 2]) -> Option<(f64, [f64; 2])> {
        match self {
            SpaceProfile::Zero => Some((0.0, [0.0; 2])),
            SpaceProfile::Const(c) => Some((*c, [0.0; 2])),
            SpaceProfile::Bump { center, width, height } => {
                let c = [center[0], center.get(1).copied().unwrap_or(0.0)];
                let dim = center.len();
                let d = [p[0] - c[0], if dim > 1 { p[1] - c[1] } else { 0.0 }];
                let w2 = width * width;
                let (v, dv) = bump((d[0] * d[0] + d[1] * d[1]) / w2);
                Some((height * v, [height * dv * 2.0 * d[0] / w2, height * dv * 2.0 * d[1] / w2]))
            }
            SpaceProfile::Poly(c) => {
                let (mut v, mut dv) = (0.0, 0.0);
                for ci in c.iter().rev() {
                    dv = dv * p[0] + v;
                    v = v * p[0] + ci;
                }
                Some((v, [dv, 0.0]))
            }
            SpaceProfile::Mode { .. } | SpaceProfile::Lift => None,
        }
    }

    /// Value as a function of a single coordinate (for boundary faces).
    pub fn eval_1d(&self, s: f64) -> Result<f64, CatalogError> {
        match self {
            SpaceProfile::Bump { center, .. } if center.len() != 1 => {
                Err(CatalogError::NotAFaceProfile(self.to_string()))
            }
            _ => self
                .eval([s, 0.0])
                .map(|(v, _)| v)
                .ok_or_else(|| CatalogError::NotAFaceProfile(self.to_string())),
        }
    }

    fn check_dim(&self, dom: &Domain) -> Result<(), CatalogError> {
        if let SpaceProfile::Bump { center, .. } = self {
            if center.len() != dom.dim() {
                return Err(CatalogError::Arguments {
                    name: "bump".into(),
                    reason: format!("needs {} centre coordinates on this domain", dom.dim()),
                });
            }
        }
        Ok(())
    }
}

/// What a sampler may need besides the mesh.
pub struct SampleContext<'a> {
    pub domain: &'a Domain,
    pub lambda: &'a RobinCoefficient,
    pub basis: Option<&'a Spectrum>,
    pub boundary: &'a BoundaryData,
}

/// Samples a sum of profiles, with the exact outward normal derivative.
pub fn sample_space(profiles: &[SpaceProfile], ctx: &SampleContext) -> Result<SpaceData, CatalogError> {
    let dom = ctx.domain;
    let mut out = SpaceData::zeros(dom);
    for p in profiles {
        p.check_dim(dom)?;
        let part = match p {
            SpaceProfile::Mode { n, amp } => {
                let basis = ctx.basis.ok_or_else(|| CatalogError::NeedsBasis(p.to_string()))?;
                let pair = basis.pairs.get(n - 1).ok_or(CatalogError::ModeOutOfRange {
                    n: *n,
                    available: basis.len(),
                })?;
                let values: Vec<f64> = pair.psi.iter().map(|v| amp * v).collect();
                // Robin eigenfunctions satisfy ∂ψ/∂ν = −λψ
                let lam = ctx.lambda.trace(dom);
                let tr = BoundaryTrace::of_field(dom, &values);
                SpaceData::with_flux(values, lam.map2(&tr, |l, u| -l * u))
            }
            SpaceProfile::Lift => {
                let b0 = ctx.boundary.trace(dom, 0.0);
                let values =
                    elliptic_lift(&b0, ctx.lambda, dom).map_err(|e| CatalogError::Lift(e.to_string()))?;
                let lam = ctx.lambda.trace(dom);
                let tr = BoundaryTrace::of_field(dom, &values);
                let flux = b0.map2(&lam.map2(&tr, |l, u| l * u), |b, lu| b - lu);
                SpaceData::with_flux(values, flux)
            }
            _ => {
                let values = dom.sample(|x, y| p.eval([x, y]).unwrap().0);
                let flux = BoundaryTrace::from_fn(dom, |face, s| {
                    let pt = face_point(dom, face, s);
                    let g = p.eval(pt).unwrap().1;
                    let n = face.outward_normal();
                    g[0] * n[0] + g[1] * n[1]
                });
                SpaceData::with_flux(values, flux)
            }
        };
        out = out.add(&part);
    }
    Ok(out)
}

fn face_point(dom: &Domain, face: Face, s: f64) -> [f64; 2] {
    let l = dom.lengths();
    match face {
        Face::Left => [0.0, s],
        Face::Right => [l[0], s],
        Face::Bottom => [s, 0.0],
        Face::Top => [s, l[1]],
    }
}

/// A scalar time sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeProfile {
    Zero,
    Const(f64),
    Linear(f64),
    /// `min(t/t1, 1)`.
    Ramp(f64),
    /// C² ramp `10s³ − 15s⁴ + 6s⁵`, `s = min(t/t1, 1)`.
    Smoothstep(f64),
    Sin(f64),
    Cos(f64),
    Decay(f64),
    Power(f64),
}

impl FromStr for TimeProfile {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let v = numbers(name, args)?;
        if name == "zero" {
            arity(name, v.len(), &[0])?;
            return Ok(TimeProfile::Zero);
        }
        arity(name, v.len(), &[1])?;
        let x = v[0];
        let positive = |p: TimeProfile| {
            if x > 0.0 {
                Ok(p)
            } else {
                Err(CatalogError::Arguments {
                    name: name.into(),
                    reason: "parameter must be positive".into(),
                })
            }
        };
        match name {
            "const" => Ok(TimeProfile::Const(x)),
            "linear" => Ok(TimeProfile::Linear(x)),
            "ramp" => positive(TimeProfile::Ramp(x)),
            "smoothstep" => positive(TimeProfile::Smoothstep(x)),
            "sin" => Ok(TimeProfile::Sin(x)),
            "cos" => Ok(TimeProfile::Cos(x)),
            "decay" => Ok(TimeProfile::Decay(x)),
            "power" => {
                if x >= 0.0 {
                    Ok(TimeProfile::Power(x))
                } else {
                    Err(CatalogError::Arguments {
                        name: name.into(),
                        reason: "exponent must be nonnegative".into(),
                    })
                }
            }
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for TimeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeProfile::Zero => write!(f, "zero"),
            TimeProfile::Const(x) => write!(f, "const:{x}"),
            TimeProfile::Linear(x) => write!(f, "linear:{x}"),
            TimeProfile::Ramp(x) => write!(f, "ramp:{x}"),
            TimeProfile::Smoothstep(x) => write!(f, "smoothstep:{x}"),
            TimeProfile::Sin(x) => write!(f, "sin:{x}"),
            TimeProfile::Cos(x) => write!(f, "cos:{x}"),
            TimeProfile::Decay(x) => write!(f, "decay:{x}"),
            TimeProfile::Power(x) => write!(f, "power:{x}"),
        }
    }
}

impl TimeProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TimeProfile::Zero => 0.0,
            TimeProfile::Const(c) => c,
            TimeProfile::Linear(r) => r * t,
            TimeProfile::Ramp(t1) => (t / t1).min(1.0),
            TimeProfile::Smoothstep(t1) => {
                let s = (t / t1).clamp(0.0, 1.0);
                s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
            }
            TimeProfile::Sin(w) => (w * t).sin(),
            TimeProfile::Cos(w) => (w * t).cos(),
            TimeProfile::Decay(r) => (-r * t).exp(),
            TimeProfile::Power(p) => t.powf(p),
        }
    }
}

/// Sum of time profiles as a [`TimeFn`].
pub fn time_fn(profiles: &[TimeProfile]) -> TimeFn {
    let ps: Vec<TimeProfile> = profiles
        .iter()
        .copied()
        .filter(|p| !matches!(p, TimeProfile::Zero | TimeProfile::Const(0.0)))
        .collect();
    if ps.is_empty() {
        return TimeFn::zero();
    }
    TimeFn::new(move |t| ps.iter().map(|p| p.eval(t)).sum())
}

/// Separable boundary data: one space sum per face times a shared time sum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundarySpec {
    pub left: Vec<SpaceProfile>,
    pub right: Vec<SpaceProfile>,
    pub bottom: Vec<SpaceProfile>,
    pub top: Vec<SpaceProfile>,
    pub time: Vec<TimeProfile>,
}

impl BoundarySpec {
    fn face(&self, face: Face) -> &[SpaceProfile] {
        match face {
            Face::Left => &self.left,
            Face::Right => &self.right,
            Face::Bottom => &self.bottom,
            Face::Top => &self.top,
        }
    }

    pub fn build(&self, dom: &Domain) -> Result<BoundaryData, CatalogError> {
        for &face in Face::ALL.iter() {
            if !dom.faces().contains(&face) && self.face(face).iter().any(|p| *p != SpaceProfile::Zero) {
                return Err(CatalogError::Arguments {
                    name: face.name().into(),
                    reason: "face does not exist on this domain".into(),
                });
            }
            for p in self.face(face) {
                p.eval_1d(0.0)?;
            }
        }
        let all_zero = dom
            .faces()
            .iter()
            .all(|f| self.face(*f).iter().all(|p| matches!(p, SpaceProfile::Zero | SpaceProfile::Const(0.0))));
        let time = time_fn(&self.time);
        if all_zero || time.is_zero() {
            return Ok(BoundaryData::zero());
        }
        let spec = self.clone();
        Ok(BoundaryData::separable(
            move |face, s| spec.face(face).iter().map(|p| p.eval_1d(s).unwrap_or(0.0)).sum(),
            time,
        ))
    }
}

/// Parses selectors joined by `+`.
pub fn parse_list<T: FromStr<Err = CatalogError>>(s: &str) -> Result<Vec<T>, CatalogError> {
    s.split('+').map(|p| p.parse()).collect()
}

/// A complete problem described by catalog selectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub alpha: f64,
    pub t_final: f64,
    pub domain: Domain,
    pub lambda: RobinCoefficient,
    pub u0: Vec<SpaceProfile>,
    pub f: Vec<SpaceProfile>,
    pub g: Vec<TimeProfile>,
    pub b: BoundarySpec,
    pub enforce_compatibility: bool,
}

impl Scenario {
    /// Zero data on `domain`.
    pub fn new(alpha: f64, t_final: f64, domain: Domain, lambda: RobinCoefficient) -> Self {
        Self {
            alpha,
            t_final,
            domain,
            lambda,
            u0: vec![SpaceProfile::Zero],
            f: vec![SpaceProfile::Zero],
            g: vec![TimeProfile::Zero],
            b: BoundarySpec::default(),
            enforce_compatibility: true,
        }
    }

    /// Same scenario on another mesh of the same geometry.
    pub fn on(&self, domain: Domain) -> Self {
        Self {
            domain,
            ..self.clone()
        }
    }

    pub fn needs_basis(&self) -> bool {
        self.u0.iter().chain(&self.f).any(|p| matches!(p, SpaceProfile::Mode { .. }))
    }

    /// Samples everything on the mesh. `basis` is needed for `mode:` selectors.
    pub fn build(&self, basis: Option<&Spectrum>) -> Result<ProblemSpec, ScenarioError> {
        let alpha = FracOrder::new(self.alpha)?;
        self.lambda.validate(&self.domain)?;
        let b = self.b.build(&self.domain)?;
        let ctx = SampleContext {
            domain: &self.domain,
            lambda: &self.lambda,
            basis,
            boundary: &b,
        };
        let u0 = sample_space(&self.u0, &ctx)?;
        let f = sample_space(&self.f, &ctx)?.values;
        let g = time_fn(&self.g);
        Ok(ProblemSpec::new(alpha, self.t_final, self.domain.clone(), self.lambda.clone())
            .with_initial(u0)
            .with_source(f, g)
            .with_boundary(b)
            .with_compatibility(self.enforce_compatibility))
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Order(#[from] FracError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}
