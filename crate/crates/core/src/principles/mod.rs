//! Numerical checks of the maximum principles, the Hopf lemma and the
//! extremum property of the Caputo derivative on computed fields.

pub mod hopf;
pub mod suite;

use std::io::{self, Write};

pub use hopf::{
    grading_stability, hopf_auxiliary, mu_star_scan, HalfBallRegion, HopfAuxiliary, HopfError, HopfSample, MuScan,
    NonuniformCaputo, MU_SCAN_CAP,
};

use crate::frac_calculus::{caputo_left, FracOrder};
use crate::mesh::{normal_derivative, Face};
use crate::problem::ProblemSpec;
use crate::spectral_solver::SolutionField;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Hypotheses of the statement are not met on the samples.
    Inapplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "true",
            Status::Fail => "false",
            Status::Inapplicable => "inapplicable",
        }
    }
}

/// A sample point with its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub x: [f64; 2],
    pub value: f64,
}

/// Result of one check. Failures always carry a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Signed distance to the threshold (positive when passing).
    pub margin: f64,
    pub tol: f64,
    pub note: String,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
    fn inapplicable(check: &str, witness: Option<Witness>, tol: f64, note: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            status: Status::Inapplicable,
            witness,
            margin: f64::NAN,
            tol,
            note: note.into(),
        }
    }
}

fn witness(field: &SolutionField, k: usize, p: usize) -> Witness {
    Witness {
        t: field.time(k),
        x: field.domain.point(p),
        value: field.at(k, p),
    }
}

/// First sample where the data `u0`, `F = f g` or `b` is below `floor`.
fn data_below(field: &SolutionField, spec: &ProblemSpec, floor: f64, u0_floor: f64) -> Option<(Witness, &'static str)> {
    let dom = &spec.domain;
    for (p, v) in spec.u0.values.iter().enumerate() {
        if *v < u0_floor {
            return Some((
                Witness {
                    t: 0.0,
                    x: dom.point(p),
                    value: *v,
                },
                "u0",
            ));
        }
    }
    let times = field.times();
    for (k, t) in times.iter().enumerate() {
        let g = spec.g.eval(*t);
        for (p, f) in spec.f.iter().enumerate() {
            if f * g < floor {
                return Some((
                    Witness {
                        t: times[k],
                        x: dom.point(p),
                        value: f * g,
                    },
                    "F",
                ));
            }
        }
        if !spec.b.is_zero() {
            let bt = spec.b.trace(dom, *t);
            for &face in dom.faces() {
                for (s, v) in bt.face(face).iter().enumerate() {
                    if *v < floor {
                        return Some((
                            Witness {
                                t: *t,
                                x: dom.point(dom.face_node(face, s)),
                                value: *v,
                            },
                            "b",
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Weak maximum principle: nonnegative `u0`, `F`, `b` give `u ≥ 0`.
/// Passes iff `min u ≥ −tol`; inapplicable when the data scan finds a
/// negative value (reported as the witness).
pub fn weak_max_check(field: &SolutionField, spec: &ProblemSpec, tol: f64) -> Verdict {
    const CHECK: &str = "weak_max";
    if let Some((w, what)) = data_below(field, spec, 0.0, 0.0) {
        return Verdict::inapplicable(CHECK, Some(w), tol, format!("{what} is negative"));
    }
    let (k, p, v) = field.argmin();
    let margin = v + tol;
    Verdict {
        check: CHECK.into(),
        status: if margin >= 0.0 { Status::Pass } else { Status::Fail },
        witness: Some(witness(field, k, p)),
        margin,
        tol,
        note: String::new(),
    }
}

/// Strong positivity: `u0 > 0`, `F, b ≥ 0` give `u > 0`. Passes iff
/// `min u > tol` with `tol > 0`.
pub fn strong_positivity_check(field: &SolutionField, spec: &ProblemSpec, tol: f64) -> Verdict {
    const CHECK: &str = "strong_positivity";
    if !(tol > 0.0) {
        return Verdict::inapplicable(CHECK, None, tol, "threshold must be positive");
    }
    if let Some((w, what)) = data_below(field, spec, 0.0, f64::MIN_POSITIVE) {
        let note = if what == "u0" { "u0 is not strictly positive" } else { "data is negative" };
        return Verdict::inapplicable(CHECK, Some(w), tol, format!("{note} ({what})"));
    }
    let (k, p, v) = field.argmin();
    let margin = v - tol;
    Verdict {
        check: CHECK.into(),
        status: if margin > 0.0 { Status::Pass } else { Status::Fail },
        witness: Some(witness(field, k, p)),
        margin,
        tol,
        note: format!("threshold {tol:e}"),
    }
}

/// Which extremum the Hopf check looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

/// Hopf lemma: at a strict boundary maximum (minimum) attained at `t > 0`,
/// the outward normal derivative is positive (negative).
///
/// The extremum over all samples must lie on a face (not a corner) at
/// `t > 0`, and every spatially interior sample within graph distance 2
/// must be below `M − tol` (above `m + tol`); otherwise the verdict is
/// inapplicable. Passes iff the one-sided normal derivative exceeds `tol`
/// in the asserted direction.
pub fn hopf_normal_check(field: &SolutionField, tol: f64, which: Extremum) -> Verdict {
    let check = match which {
        Extremum::Max => "hopf_max",
        Extremum::Min => "hopf_min",
    };
    let sign = if which == Extremum::Max { 1.0 } else { -1.0 };
    // extremum of sign·u
    let (k, p, _) = if which == Extremum::Max { field.argmax() } else { field.argmin() };
    let w = witness(field, k, p);
    let dom = &field.domain;
    if k == 0 {
        return Verdict::inapplicable(check, Some(w), tol, "extremum attained at t = 0");
    }
    if !dom.is_boundary(p) {
        return Verdict::inapplicable(check, Some(w), tol, "extremum attained in the interior");
    }
    let faces: Vec<(Face, usize)> = dom
        .faces()
        .iter()
        .flat_map(|f| (0..dom.face_len(*f)).filter(|s| dom.face_node(*f, *s) == p).map(move |s| (*f, s)))
        .collect();
    if faces.len() != 1 {
        return Verdict::inapplicable(check, Some(w), tol, "extremum at a corner (no unique normal)");
    }
    let (face, s) = faces[0];
    // strictness over the graph-distance-2 neighbourhood
    let m = sign * w.value;
    let (i0, j0) = dom.ij(p);
    let ny = if dom.dim() == 2 { dom.ny() } else { 1 };
    for dk in -2i64..=2 {
        for di in -2i64..=2 {
            for dj in -2i64..=2 {
                if dk.abs() + di.abs() + dj.abs() > 2 || (dk, di, dj) == (0, 0, 0) {
                    continue;
                }
                let (kk, ii, jj) = (k as i64 + dk, i0 as i64 + di, j0 as i64 + dj);
                if kk < 0 || kk > field.steps as i64 || ii < 0 || ii >= dom.nx() as i64 || jj < 0 || jj >= ny as i64 {
                    continue;
                }
                let q = dom.index(ii as usize, jj as usize);
                if dom.is_boundary(q) {
                    continue;
                }
                if sign * field.at(kk as usize, q) >= m - tol {
                    return Verdict::inapplicable(
                        check,
                        Some(w),
                        tol,
                        "extremum is not strict over the neighbouring interior samples",
                    );
                }
            }
        }
    }
    let dn = normal_derivative(dom, field.slice(k)).face(face)[s];
    let margin = sign * dn - tol;
    Verdict {
        check: check.into(),
        status: if margin > 0.0 { Status::Pass } else { Status::Fail },
        witness: Some(Witness { value: dn, ..w }),
        margin,
        tol,
        note: format!("outward normal derivative on the {} face; u = {:e}", face.name(), w.value),
    }
}

/// At the sampled minimum `(x*, t*)`, `t* > 0`, the L1 Caputo derivative of
/// `t ↦ u(x*, t)` is `≤ tol`.
pub fn extremum_caputo_check(field: &SolutionField, a: FracOrder, tol: f64) -> Verdict {
    const CHECK: &str = "extremum_caputo";
    let (k, p, _) = field.argmin();
    let w = witness(field, k, p);
    if k == 0 {
        return Verdict::inapplicable(CHECK, Some(w), tol, "minimum attained at t = 0");
    }
    let cap = match caputo_left(&field.trace(p), a) {
        Ok(c) => c.values()[k],
        Err(e) => return Verdict::inapplicable(CHECK, Some(w), tol, e.to_string()),
    };
    let margin = tol - cap;
    Verdict {
        check: CHECK.into(),
        status: if margin >= 0.0 { Status::Pass } else { Status::Fail },
        witness: Some(Witness { value: cap, ..w }),
        margin,
        tol,
        note: format!("sampled minimum u = {:e}; sub-grid extrema not resolved", w.value),
    }
}

/// Writes verdicts as CSV: `check,pass,witness_t,witness_x[,witness_y],value,margin,tol`.
pub fn write_verdict_csv<W: Write>(verdicts: &[Verdict], dim: usize, header: &[String], mut w: W) -> io::Result<()> {
    writeln!(w, "# fracrobin-verdict v1")?;
    for h in header {
        writeln!(w, "# {h}")?;
    }
    if dim == 1 {
        writeln!(w, "check,pass,witness_t,witness_x,value,margin,tol")?;
    } else {
        writeln!(w, "check,pass,witness_t,witness_x,witness_y,value,margin,tol")?;
    }
    for v in verdicts {
        write!(w, "{},{},", v.check, v.status.name())?;
        match v.witness {
            Some(wt) => {
                write!(w, "{:.16e},{:.16e},", wt.t, wt.x[0])?;
                if dim == 2 {
                    write!(w, "{:.16e},", wt.x[1])?;
                }
                write!(w, "{:.16e},", wt.value)?;
            }
            None => write!(w, "{}", if dim == 2 { ",,,," } else { ",,," })?,
        }
        if v.margin.is_nan() {
            writeln!(w, ",{:.16e}", v.tol)?;
        } else {
            writeln!(w, "{:.16e},{:.16e}", v.margin, v.tol)?;
        }
    }
    Ok(())
}
