//! Uniform meshes on an interval or an axis-aligned rectangle, boundary
//! traces, and the discrete inner products shared by every module.

use thiserror::Error;

use crate::quadrature::{gregory_weights, trapezoid_weights};

/// Minimum nodes per axis.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("domain lengths must be positive and finite, got {0:?}")]
    Length(Vec<f64>),
    #[error("at least {MIN_NODES} nodes per axis are required, got {0}")]
    TooCoarse(usize),
    #[error("field has {got} samples, mesh has {expected}")]
    Mismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Interval,
    Rectangle,
}

/// Boundary faces. An interval only has `Left` and `Right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Left,
    Right,
    Bottom,
    Top,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::Left, Face::Right, Face::Bottom, Face::Top];

    pub fn name(self) -> &'static str {
        match self {
            Face::Left => "left",
            Face::Right => "right",
            Face::Bottom => "bottom",
            Face::Top => "top",
        }
    }

    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            Face::Left => [-1.0, 0.0],
            Face::Right => [1.0, 0.0],
            Face::Bottom => [0.0, -1.0],
            Face::Top => [0.0, 1.0],
        }
    }
}

/// Interval `[0, L]` or rectangle `[0, Lx] × [0, Ly]` with a uniform mesh
/// (endpoints included). Rectangle samples are row-major: `idx = j·nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    lengths: [f64; 2],
    mesh: [usize; 2],
}

impl Domain {
    pub fn interval(length: f64, nodes: usize) -> Result<Self, MeshError> {
        check_len(&[length])?;
        check_nodes(nodes)?;
        Ok(Self {
            kind: DomainKind::Interval,
            lengths: [length, 0.0],
            mesh: [nodes, 1],
        })
    }

    pub fn rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self, MeshError> {
        check_len(&[lx, ly])?;
        check_nodes(nx)?;
        check_nodes(ny)?;
        Ok(Self {
            kind: DomainKind::Rectangle,
            lengths: [lx, ly],
            mesh: [nx, ny],
        })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }
    pub fn dim(&self) -> usize {
        match self.kind {
            DomainKind::Interval => 1,
            DomainKind::Rectangle => 2,
        }
    }
    pub fn lengths(&self) -> &[f64] {
        &self.lengths[..self.dim()]
    }
    pub fn mesh(&self) -> &[usize] {
        &self.mesh[..self.dim()]
    }
    pub fn nx(&self) -> usize {
        self.mesh[0]
    }
    pub fn ny(&self) -> usize {
        self.mesh[1]
    }
    pub fn hx(&self) -> f64 {
        self.lengths[0] / (self.mesh[0] - 1) as f64
    }
    pub fn hy(&self) -> f64 {
        if self.dim() == 1 {
            return 1.0;
        }
        self.lengths[1] / (self.mesh[1] - 1) as f64
    }
    pub fn len(&self) -> usize {
        self.mesh[0] * self.mesh[1]
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }
    pub fn y(&self, j: usize) -> f64 {
        if self.dim() == 1 {
            0.0
        } else {
            j as f64 * self.hy()
        }
    }
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.mesh[0] + i
    }
    /// `(i, j)` of a flat index.
    pub fn ij(&self, idx: usize) -> (usize, usize) {
        (idx % self.mesh[0], idx / self.mesh[0])
    }
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.ij(idx);
        [self.x(i), self.y(j)]
    }

    /// The x axis (or the interval itself) as a 1D domain.
    pub fn x_axis(&self) -> Domain {
        Domain {
            kind: DomainKind::Interval,
            lengths: [self.lengths[0], 0.0],
            mesh: [self.mesh[0], 1],
        }
    }
    /// The y axis of a rectangle as a 1D domain.
    pub fn y_axis(&self) -> Option<Domain> {
        (self.dim() == 2).then(|| Domain {
            kind: DomainKind::Interval,
            lengths: [self.lengths[1], 0.0],
            mesh: [self.mesh[1], 1],
        })
    }

    pub fn faces(&self) -> &'static [Face] {
        match self.kind {
            DomainKind::Interval => &Face::ALL[..2],
            DomainKind::Rectangle => &Face::ALL,
        }
    }

    /// Number of nodes on a face.
    pub fn face_len(&self, face: Face) -> usize {
        match (self.kind, face) {
            (DomainKind::Interval, Face::Left | Face::Right) => 1,
            (DomainKind::Interval, _) => 0,
            (_, Face::Left | Face::Right) => self.mesh[1],
            (_, Face::Bottom | Face::Top) => self.mesh[0],
        }
    }

    /// Flat index of the `s`-th node along a face (ordered by increasing
    /// coordinate).
    pub fn face_node(&self, face: Face, s: usize) -> usize {
        let (nx, ny) = (self.mesh[0], self.mesh[1]);
        match face {
            Face::Left => self.index(0, s),
            Face::Right => self.index(nx - 1, s),
            Face::Bottom => self.index(s, 0),
            Face::Top => self.index(s, ny - 1),
        }
    }

    /// Coordinate along the face of its `s`-th node (0 for interval ends).
    pub fn face_coordinate(&self, face: Face, s: usize) -> f64 {
        match (self.kind, face) {
            (DomainKind::Interval, _) => 0.0,
            (_, Face::Left | Face::Right) => self.y(s),
            _ => self.x(s),
        }
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let (i, j) = self.ij(idx);
        i == 0 || i + 1 == self.mesh[0] || (self.dim() == 2 && (j == 0 || j + 1 == self.mesh[1]))
    }

    /// Composite trapezoid weights (tensor product on rectangles).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        self.tensor(trapezoid_weights)
    }

    /// Endpoint-corrected trapezoid weights (tensor product on rectangles).
    pub fn gregory_weights(&self) -> Vec<f64> {
        self.tensor(gregory_weights)
    }

    fn tensor(&self, rule: fn(usize, f64) -> Vec<f64>) -> Vec<f64> {
        let wx = rule(self.mesh[0], self.hx());
        if self.dim() == 1 {
            return wx;
        }
        let wy = rule(self.mesh[1], self.hy());
        let mut w = Vec::with_capacity(self.len());
        for wyj in &wy {
            w.extend(wx.iter().map(|wxi| wxi * wyj));
        }
        w
    }

    /// Samples `f(x, y)` on the mesh (`y = 0` on intervals).
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.len())
            .map(|idx| {
                let [x, y] = self.point(idx);
                f(x, y)
            })
            .collect()
    }

    pub fn check_field(&self, field: &[f64]) -> Result<(), MeshError> {
        if field.len() != self.len() {
            return Err(MeshError::Mismatch {
                expected: self.len(),
                got: field.len(),
            });
        }
        Ok(())
    }
}

fn check_len(l: &[f64]) -> Result<(), MeshError> {
    if l.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(MeshError::Length(l.to_vec()))
    }
}

fn check_nodes(n: usize) -> Result<(), MeshError> {
    if n < MIN_NODES {
        Err(MeshError::TooCoarse(n))
    } else {
        Ok(())
    }
}

/// Weighted inner product `Σ w_i a_i b_i`.
pub fn inner(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}

pub fn norm(w: &[f64], a: &[f64]) -> f64 {
    inner(w, a, a).sqrt()
}

/// Values on each boundary face, ordered along the face.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundaryTrace {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
}

impl BoundaryTrace {
    pub fn zeros(dom: &Domain) -> Self {
        Self::from_fn(dom, |_, _| 0.0)
    }

    /// Builds a trace from `f(face, coordinate along face)`.
    pub fn from_fn(dom: &Domain, f: impl Fn(Face, f64) -> f64) -> Self {
        let mut out = Self::default();
        for &face in dom.faces() {
            let vals = (0..dom.face_len(face))
                .map(|s| f(face, dom.face_coordinate(face, s)))
                .collect();
            *out.face_mut(face) = vals;
        }
        out
    }

    /// Restriction of a sampled field to the boundary.
    pub fn of_field(dom: &Domain, field: &[f64]) -> Self {
        let mut out = Self::default();
        for &face in dom.faces() {
            *out.face_mut(face) = (0..dom.face_len(face))
                .map(|s| field[dom.face_node(face, s)])
                .collect();
        }
        out
    }

    pub fn face(&self, face: Face) -> &[f64] {
        match face {
            Face::Left => &self.left,
            Face::Right => &self.right,
            Face::Bottom => &self.bottom,
            Face::Top => &self.top,
        }
    }

    pub fn face_mut(&mut self, face: Face) -> &mut Vec<f64> {
        match face {
            Face::Left => &mut self.left,
            Face::Right => &mut self.right,
            Face::Bottom => &mut self.bottom,
            Face::Top => &mut self.top,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.left
            .iter()
            .chain(&self.right)
            .chain(&self.bottom)
            .chain(&self.top)
            .copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    /// `self + s·other`, face by face.
    pub fn axpy(&self, s: f64, other: &BoundaryTrace) -> BoundaryTrace {
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| a + s * b).collect();
        BoundaryTrace {
            left: comb(&self.left, &other.left),
            right: comb(&self.right, &other.right),
            bottom: comb(&self.bottom, &other.bottom),
            top: comb(&self.top, &other.top),
        }
    }

    pub fn map2(&self, other: &BoundaryTrace, f: impl Fn(f64, f64) -> f64) -> BoundaryTrace {
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| f(*a, *b)).collect();
        BoundaryTrace {
            left: comb(&self.left, &other.left),
            right: comb(&self.right, &other.right),
            bottom: comb(&self.bottom, &other.bottom),
            top: comb(&self.top, &other.top),
        }
    }
}

/// Outward normal derivative of a sampled field by one-sided second-order
/// differences.
pub fn normal_derivative(dom: &Domain, field: &[f64]) -> BoundaryTrace {
    let mut out = BoundaryTrace::default();
    let (nx, ny) = (dom.nx(), dom.ny());
    for &face in dom.faces() {
        let vals = (0..dom.face_len(face))
            .map(|s| {
                let (idx, step, h) = match face {
                    Face::Left => (dom.index(0, s), 1isize, dom.hx()),
                    Face::Right => (dom.index(nx - 1, s), -1, dom.hx()),
                    Face::Bottom => (dom.index(s, 0), nx as isize, dom.hy()),
                    Face::Top => (dom.index(s, ny - 1), -(nx as isize), dom.hy()),
                };
                let at = |m: isize| field[(idx as isize + m * step) as usize];
                // derivative into the domain, negated for the outward normal
                -(-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
            })
            .collect();
        *out.face_mut(face) = vals;
    }
    out
}
