//! The auxiliary function of the Hopf lemma and the sign of `L^α h`.
//!
//! `h(x, t) = E_{α,1}(−μ|t−t0|^{2α}) (e^{−μ|x−x̄|²} − e^{−μ(R² − (t−t0)²)})`
//! on the half ball `B⁺ = {|x−x̄|² + (t−t0)² ≤ R², (x−x̄)·n ≥ δR}`, with
//! `L^α = ∂^α_t − Δ` and the Caputo derivative taken from `t = 0`.
//!
//! Values are reported in the scaled form `S = e^{μ|x−x̄|²} L^α h / μ`,
//! which has the sign of `L^α h` and stays representable for large μ:
//!
//! `S = [C_φ(t) − C_{χ_r}(t)]/μ − φ(t)(4μr² − 2d)`, `r = |x − x̄|`,
//!
//! where `φ(τ) = E_{α,1}(−μ|τ−t0|^{2α})`, `χ_r(τ) = φ(τ) e^{−μ(R² − (τ−t0)² − r²)}`
//! and `C_y` is the Caputo derivative of `y`.

use std::collections::HashMap;

use thiserror::Error;

use crate::frac_calculus::FracOrder;
use crate::mittag_leffler::{relaxation, MlError};
use crate::special::gamma;

/// Cap of the doubling scan.
pub const MU_SCAN_CAP: f64 = 1048576.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("invalid region: {0}")]
    Region(String),
    #[error("μ must be positive and finite, got {0}")]
    Mu(f64),
    #[error("time grid must be graded at t0 (exponent > 1) when α ≤ 1/2; got exponent {0}")]
    NotGraded(f64),
    #[error(transparent)]
    Ml(#[from] MlError),
}

/// `B⁺` and its sampling. The centre is `x̄ = 0`, the separating hyperplane
/// is `x·n = δR` with `n = e_1`, so `x0 = R e_1` and `|x| ≥ δR` on `B⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfBallRegion {
    pub dim: usize,
    pub radius: f64,
    pub t0: f64,
    /// Offset of the hyperplane as a fraction of `R`.
    pub delta: f64,
    /// Samples per spatial axis.
    pub space_samples: usize,
    /// Time nodes per side of `t0`.
    pub time_nodes: usize,
    /// Grading exponent of the time grid at `t0`.
    pub grading: f64,
}

impl HalfBallRegion {
    /// Ball touching `t = 0` (`t0 = R`), hyperplane at `0.8 R`, grading `1/α`.
    pub fn new(dim: usize, radius: f64, a: FracOrder) -> Self {
        Self {
            dim,
            radius,
            t0: radius,
            delta: 0.8,
            space_samples: 21,
            time_nodes: 200,
            grading: 1.0 / a.alpha(),
        }
    }

    pub fn validate(&self, a: FracOrder) -> Result<(), HopfError> {
        let bad = |m: &str| Err(HopfError::Region(m.to_string()));
        if self.dim != 1 && self.dim != 2 {
            return bad("only d = 1 and d = 2 are supported");
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("radius must be positive");
        }
        if self.t0 < self.radius {
            return bad("the ball must lie in t ≥ 0 (t0 ≥ R)");
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("hyperplane offset must lie in (0, 1)");
        }
        if self.space_samples < 2 || self.time_nodes < 4 {
            return bad("too few samples");
        }
        if !(self.grading >= 1.0) {
            return bad("grading exponent must be ≥ 1");
        }
        if a.alpha() <= 0.5 && self.grading <= 1.0 {
            return Err(HopfError::NotGraded(self.grading));
        }
        Ok(())
    }

    /// `inf |x − x̄|` over `B⁺`.
    pub fn separation(&self) -> f64 {
        self.delta * self.radius
    }

    /// Same region with twice the time-grid density.
    pub fn refined(&self) -> Self {
        Self {
            time_nodes: 2 * self.time_nodes,
            ..self.clone()
        }
    }

    /// Nodes on `[0, t0 + R]`, graded towards `t0` from both sides.
    pub fn time_grid(&self) -> Vec<f64> {
        let (r, t0, m) = (self.radius, self.t0, self.time_nodes);
        let mut t = Vec::new();
        // uniform prefix on [0, t0 − R] when the ball does not touch t = 0
        let gap = t0 - r;
        if gap > 0.0 {
            let h = r / m as f64;
            let n = (gap / h).ceil() as usize;
            t.extend((0..n).map(|j| gap * j as f64 / n as f64));
        }
        for j in (1..=m).rev() {
            t.push(t0 - r * (j as f64 / m as f64).powf(self.grading));
        }
        t.push(t0);
        for j in 1..=m {
            t.push(t0 + r * (j as f64 / m as f64).powf(self.grading));
        }
        t
    }

    /// Spatial sample points in `B⁺` coordinates (`x` along `n`, `y`
    /// across), before clipping in time.
    fn space_points(&self) -> Vec<[f64; 2]> {
        let r = self.radius;
        let m = self.space_samples;
        let xs: Vec<f64> = (0..m)
            .map(|i| self.delta * r + (1.0 - self.delta) * r * i as f64 / (m - 1) as f64)
            .collect();
        if self.dim == 1 {
            return xs.into_iter().map(|x| [x, 0.0]).collect();
        }
        let mut pts = Vec::new();
        for x in &xs {
            for j in 0..m {
                let y = -r + 2.0 * r * j as f64 / (m - 1) as f64;
                if x * x + y * y <= r * r * (1.0 + 1e-12) {
                    pts.push([*x, y]);
                }
            }
        }
        pts
    }
}

/// L1 Caputo derivative from `times[0]` on a nonuniform grid.
///
/// The kernel weights depend only on the grid and are computed once.
#[derive(Debug, Clone)]
pub struct NonuniformCaputo {
    times: Vec<f64>,
    classical: bool,
    /// Row `k` holds `[(t_k − t_j)^{1−α} − (t_k − t_{j+1})^{1−α}]/Γ(2−α)`, `j < k`.
    weights: Vec<Vec<f64>>,
}

impl NonuniformCaputo {
    pub fn new(times: &[f64], a: FracOrder) -> Self {
        let alpha = a.alpha();
        let c = 1.0 / gamma(2.0 - alpha);
        let weights = if a.is_classical() {
            Vec::new()
        } else {
            (0..times.len())
                .map(|k| {
                    let tk = times[k];
                    (0..k)
                        .map(|j| c * ((tk - times[j]).powf(1.0 - alpha) - (tk - times[j + 1]).powf(1.0 - alpha)))
                        .collect()
                })
                .collect()
        };
        Self {
            times: times.to_vec(),
            classical: a.is_classical(),
            weights,
        }
    }

    /// Derivative at every node (node 0 holds 0).
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let t = &self.times;
        let n = t.len();
        let slopes: Vec<f64> = (0..n - 1).map(|j| (y[j + 1] - y[j]) / (t[j + 1] - t[j])).collect();
        if self.classical {
            return std::iter::once(0.0).chain(slopes).collect();
        }
        self.weights
            .iter()
            .map(|row| row.iter().zip(&slopes).map(|(w, s)| w * s).sum())
            .collect()
    }
}

/// One sample of `B⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfSample {
    pub x: [f64; 2],
    pub t: f64,
    pub h: f64,
    /// `e^{μ|x−x̄|²} L^α h / μ`.
    pub scaled_l_alpha_h: f64,
}

/// Samples of `h` and of the scaled `L^α h` over `B⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfAuxiliary {
    pub mu: f64,
    pub samples: Vec<HopfSample>,
}

impl HopfAuxiliary {
    /// Sample with the largest scaled `L^α h`.
    pub fn max(&self) -> HopfSample {
        *self
            .samples
            .iter()
            .max_by(|a, b| a.scaled_l_alpha_h.total_cmp(&b.scaled_l_alpha_h))
            .expect("nonempty")
    }
    pub fn max_value(&self) -> f64 {
        self.max().scaled_l_alpha_h
    }
}

/// Evaluates `h` and the scaled `L^α h` on the sample grid of `region`.
pub fn hopf_auxiliary(region: &HalfBallRegion, mu: f64, a: FracOrder) -> Result<HopfAuxiliary, HopfError> {
    region.validate(a)?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(HopfError::Mu(mu));
    }
    let (r, t0) = (region.radius, region.t0);
    let d = region.dim as f64;
    let times = region.time_grid();
    // φ(τ) = E_{α,1}(−μ|τ−t0|^{2α}) = relaxation with "time" |τ−t0|²
    let phi = times
        .iter()
        .map(|t| relaxation(a, mu, (t - t0).powi(2)))
        .collect::<Result<Vec<_>, _>>()?;
    let caputo = NonuniformCaputo::new(&times, a);
    let c_phi = caputo.apply(&phi);
    let pts = region.space_points();

    // distinct radii share the χ_r Caputo derivative
    let mut radii: Vec<f64> = pts.iter().map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt()).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * r);
    let c_chi: Vec<Vec<f64>> = radii
        .iter()
        .map(|rr| {
            let chi: Vec<f64> = times
                .iter()
                .zip(&phi)
                .map(|(t, p)| p * (-mu * (r * r - (t - t0).powi(2) - rr * rr)).exp())
                .collect();
            caputo.apply(&chi)
        })
        .collect();

    let mut samples = Vec::new();
    for p in &pts {
        let rr2 = p[0] * p[0] + p[1] * p[1];
        let ri = radii
            .iter()
            .position(|q| (q - rr2.sqrt()).abs() <= 1e-14 * r)
            .expect("radius present");
        for (k, t) in times.iter().enumerate() {
            if k == 0 || rr2 + (t - t0).powi(2) > r * r * (1.0 + 1e-12) {
                continue;
            }
            let h = phi[k] * ((-mu * rr2).exp() - (-mu * (r * r - (t - t0).powi(2))).exp());
            let s = (c_phi[k] - c_chi[ri][k]) / mu - phi[k] * (4.0 * mu * rr2 - 2.0 * d);
            samples.push(HopfSample {
                x: *p,
                t: *t,
                h,
                scaled_l_alpha_h: s,
            });
        }
    }
    if samples.is_empty() {
        return Err(HopfError::Region("no samples in B⁺".into()));
    }
    Ok(HopfAuxiliary { mu, samples })
}

/// Result of the doubling scan over μ = 1, 2, 4, … ≤ [`MU_SCAN_CAP`].
#[derive(Debug, Clone, PartialEq)]
pub struct MuScan {
    /// `(μ, max_{B⁺} e^{μ|x−x̄|²} L^α h / μ)` for every scanned μ.
    pub table: Vec<(f64, f64)>,
    /// Smallest scanned μ with a negative maximum at μ, 2μ and 4μ.
    pub mu_star: Option<f64>,
}

pub fn mu_star_scan(region: &HalfBallRegion, a: FracOrder) -> Result<MuScan, HopfError> {
    let mut table = Vec::new();
    let mut mu = 1.0;
    while mu <= 4.0 * MU_SCAN_CAP {
        let m = hopf_auxiliary(region, mu, a)?.max_value();
        table.push((mu, if m.is_nan() { f64::INFINITY } else { m }));
        mu *= 2.0;
    }
    let mut mu_star = None;
    for w in table.windows(3) {
        if w[0].0 > MU_SCAN_CAP {
            break;
        }
        if w.iter().all(|(_, m)| *m < 0.0) {
            mu_star = Some(w[0].0);
            break;
        }
    }
    Ok(MuScan { table, mu_star })
}

/// Largest pointwise relative change of the scaled `L^α h` when the
/// time-grid density is doubled: `max_p |S_fine(p) − S(p)| / max(|S(p)|, |max S|)`
/// over the coarse samples. The refined grid contains the coarse nodes bit
/// for bit.
pub fn grading_stability(region: &HalfBallRegion, mu: f64, a: FracOrder) -> Result<f64, HopfError> {
    let coarse = hopf_auxiliary(region, mu, a)?;
    let fine = hopf_auxiliary(&region.refined(), mu, a)?;
    let key = |s: &HopfSample| (s.x[0].to_bits(), s.x[1].to_bits(), s.t.to_bits());
    let lookup: HashMap<_, f64> = fine.samples.iter().map(|s| (key(s), s.scaled_l_alpha_h)).collect();
    let floor = coarse.max_value().abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for c in &coarse.samples {
        let f = lookup
            .get(&key(c))
            .ok_or_else(|| HopfError::Region("grids do not nest".into()))?;
        worst = worst.max((f - c.scaled_l_alpha_h).abs() / c.scaled_l_alpha_h.abs().max(floor));
    }
    Ok(worst)
}
