//! Seeded problem families with provably nonnegative (or positive) solutions.
//!
//! Every case is `u0 = Λ_b + a ψ1 + c ψ2`, `f = p ψ1 + q ψ2`, `g ≥ 0`, with `b`
//! a nonnegative constant per face and constant in time, so `Λ_b ≥ 0` is
//! stationary. Since `E_{α,1}(−μt^α)` and the source kernel are positive and
//! decrease in μ, `|c| ≤ a min ψ1 / max|ψ2|` (and likewise for `q`) keeps the
//! exact solution, and the semi-discrete one, nonnegative.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{BoundarySpec, Scenario, SpaceProfile, TimeProfile};
use crate::mesh::Domain;
use crate::robin_spectrum::{RobinCoefficient, Spectrum};

/// Bounds `|ψ1|` from below and `|ψ2|` from above on the mesh, and the sign
/// that makes ψ1 positive.
fn mode_bounds(basis: &Spectrum) -> (f64, f64, f64) {
    let psi1 = &basis.pairs[0].psi;
    let sign = if psi1.iter().sum::<f64>() >= 0.0 { 1.0 } else { -1.0 };
    let min1 = psi1.iter().map(|v| sign * v).fold(f64::INFINITY, f64::min);
    let max2 = basis
        .pairs
        .get(1)
        .map(|p| p.psi.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .unwrap_or(0.0);
    (sign, min1, max2)
}

fn nonnegative_time(rng: &mut ChaCha8Rng) -> TimeProfile {
    match rng.random_range(0..5) {
        0 => TimeProfile::Const(rng.random_range(0.0..2.0)),
        1 => TimeProfile::Linear(rng.random_range(0.0..2.0)),
        2 => TimeProfile::Ramp(rng.random_range(0.1..1.0)),
        3 => TimeProfile::Decay(rng.random_range(0.0..3.0)),
        _ => TimeProfile::Power(rng.random_range(0.0..2.0)),
    }
}

/// `ratio ∈ [0, 1]` scales the admissible `|c|, |q|` bound; `a_min > 0`
/// forces strictly positive initial data.
fn random_case(
    rng: &mut ChaCha8Rng,
    domain: &Domain,
    lambda: &RobinCoefficient,
    basis: &Spectrum,
    ratio: f64,
    a_min: f64,
) -> Scenario {
    let (sign, min1, max2) = mode_bounds(basis);
    let room = if max2 > 0.0 { ratio * min1.max(0.0) / max2 } else { 0.0 };
    let alpha = rng.random_range(0.2..0.95);
    let t_final = rng.random_range(0.25..2.0);
    let a = rng.random_range(a_min..1.0);
    let c = a * room * rng.random_range(-1.0..1.0);
    let p = rng.random_range(0.0..1.0);
    let q = p * room * rng.random_range(-1.0..1.0);

    let mut b = BoundarySpec {
        time: vec![TimeProfile::Const(1.0)],
        ..Default::default()
    };
    let with_boundary = rng.random_bool(0.5);
    for &face in domain.faces() {
        let v = if with_boundary { rng.random_range(0.0..1.0) } else { 0.0 };
        let slot = match face {
            crate::mesh::Face::Left => &mut b.left,
            crate::mesh::Face::Right => &mut b.right,
            crate::mesh::Face::Bottom => &mut b.bottom,
            crate::mesh::Face::Top => &mut b.top,
        };
        *slot = vec![SpaceProfile::Const(v)];
    }

    let mut s = Scenario::new(alpha, t_final, domain.clone(), lambda.clone());
    s.u0 = vec![
        SpaceProfile::Lift,
        SpaceProfile::Mode { n: 1, amp: sign * a },
        SpaceProfile::Mode { n: 2, amp: c },
    ];
    s.f = vec![
        SpaceProfile::Mode { n: 1, amp: sign * p },
        SpaceProfile::Mode { n: 2, amp: q },
    ];
    s.g = vec![nonnegative_time(rng)];
    s.b = b;
    s
}

/// `count` problems with nonnegative data and nonnegative solutions.
pub fn random_nonnegative(
    seed: u64,
    count: usize,
    domain: &Domain,
    lambda: &RobinCoefficient,
    basis: &Spectrum,
) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_case(&mut rng, domain, lambda, basis, 1.0, 0.0))
        .collect()
}

/// `count` problems with `u0 ≥ ε0 > 0` and nonnegative `F`, `b`. The
/// solution stays above half of `a min ψ1 E_{α,1}(−μ1 T^α)`.
pub fn strong_positive(
    seed: u64,
    count: usize,
    domain: &Domain,
    lambda: &RobinCoefficient,
    basis: &Spectrum,
) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_case(&mut rng, domain, lambda, basis, 0.5, 0.1))
        .collect()
}
