use super::{EigenPair, RobinCoefficient, Spectrum, SpectrumError, SpectrumMethod};
use crate::linalg::{symmetric_eigen, tridiagonal_eigen};
use crate::mesh::{BoundaryTrace, Domain, Face};
use crate::quadrature::trapezoid_weights;

/// Dense eigensolves are limited to this many unknowns.
pub const FD_MAX_UNKNOWNS: usize = 4096;

/// Symmetric finite-difference Robin operator `K = W·A`.
///
/// `A` is the 3-/5-point `-Δ_h` with ghost nodes eliminated through the
/// centred Robin condition `∂u/∂ν + λu = b`; `W` holds the trapezoid weights
/// (halved on faces). `K` is symmetric, and SPD for λ > 0.
#[derive(Debug, Clone)]
pub struct RobinStiffness {
    dom: Domain,
    wx: Vec<f64>,
    wy: Vec<f64>,
    lam: BoundaryTrace,
}

impl RobinStiffness {
    pub fn new(dom: &Domain, lam: &RobinCoefficient) -> Result<Self, SpectrumError> {
        lam.validate(dom)?;
        let wx = trapezoid_weights(dom.nx(), dom.hx());
        let wy = if dom.dim() == 1 {
            vec![1.0]
        } else {
            trapezoid_weights(dom.ny(), dom.hy())
        };
        Ok(Self {
            dom: dom.clone(),
            wx,
            wy,
            lam: lam.trace(dom),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    /// Diagonal of `W`.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.dom.len());
        for wy in &self.wy {
            w.extend(self.wx.iter().map(|wx| wx * wy));
        }
        w
    }

    /// 1D pieces along one axis: diagonal and (symmetric) off-diagonal.
    fn axis(n: usize, h: f64, lam_lo: f64, lam_hi: f64) -> (Vec<f64>, f64) {
        let mut d = vec![2.0 / h; n];
        d[0] = (1.0 + h * lam_lo) / h;
        d[n - 1] = (1.0 + h * lam_hi) / h;
        (d, -1.0 / h)
    }

    /// Symmetric tridiagonal `(diag, offdiag)` of `K` on an interval.
    pub fn tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.dom.dim() != 1 {
            return None;
        }
        let n = self.dom.nx();
        let (d, o) = Self::axis(n, self.dom.hx(), self.lam.left[0], self.lam.right[0]);
        Some((d, vec![o; n - 1]))
    }

    /// `out = K u`.
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.dom.nx(), self.dom.ny());
        let (hx, hy) = (self.dom.hx(), self.dom.hy());
        for o in out.iter_mut() {
            *o = 0.0;
        }
        for j in 0..ny {
            let (d, off) = Self::axis(nx, hx, self.lam.left[j], self.lam.right[j]);
            let row = j * nx;
            for i in 0..nx {
                let mut v = d[i] * u[row + i];
                if i > 0 {
                    v += off * u[row + i - 1];
                }
                if i + 1 < nx {
                    v += off * u[row + i + 1];
                }
                out[row + i] += self.wy[j] * v;
            }
        }
        if self.dom.dim() == 2 {
            for i in 0..nx {
                let (d, off) = Self::axis(ny, hy, self.lam.bottom[i], self.lam.top[i]);
                for j in 0..ny {
                    let mut v = d[j] * u[j * nx + i];
                    if j > 0 {
                        v += off * u[(j - 1) * nx + i];
                    }
                    if j + 1 < ny {
                        v += off * u[(j + 1) * nx + i];
                    }
                    out[j * nx + i] += self.wx[i] * v;
                }
            }
        }
    }

    /// Load vector `r` with `K Λ = r` for the discrete harmonic lift of `b`.
    pub fn boundary_load(&self, b: &BoundaryTrace) -> Vec<f64> {
        let dom = &self.dom;
        let mut r = vec![0.0; dom.len()];
        for &face in dom.faces() {
            for (s, v) in b.face(face).iter().enumerate() {
                let w = match (dom.dim(), face) {
                    (1, _) => 1.0,
                    (_, Face::Left | Face::Right) => self.wy[s],
                    _ => self.wx[s],
                };
                r[dom.face_node(face, s)] += w * v;
            }
        }
        r
    }

    /// Dense copy of `K` (row-major), built column by column.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.dom.len();
        let mut m = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for c in 0..n {
            e[c] = 1.0;
            self.apply(&e, &mut col);
            e[c] = 0.0;
            for r in 0..n {
                m[r * n + c] = col[r];
            }
        }
        m
    }
}

fn asymmetry(m: &[f64], n: usize) -> f64 {
    let scale = m
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r + 1..n {
            worst = worst.max((m[r * n + c] - m[c * n + r]).abs());
        }
    }
    worst / scale
}

/// First `n` eigenpairs of the finite-difference Robin Laplacian
/// (`K v = μ W v`), orthonormal in the trapezoid inner product. Handles λ
/// sampled along faces.
pub fn eigen_fd(dom: &Domain, lam: &RobinCoefficient, n: usize) -> Result<Spectrum, SpectrumError> {
    let op = RobinStiffness::new(dom, lam)?;
    let size = dom.len();
    if size > FD_MAX_UNKNOWNS {
        return Err(SpectrumError::TooLarge(size));
    }
    if n == 0 {
        return Err(SpectrumError::NoModes);
    }
    if n > size {
        return Err(SpectrumError::TooManyModes {
            requested: n,
            available: size,
        });
    }
    let w = op.weights();
    let rs: Vec<f64> = w.iter().map(|v| 1.0 / v.sqrt()).collect();
    let k = op.dense();
    let defect = asymmetry(&k, size);
    if defect > 1e-12 {
        return Err(SpectrumError::Asymmetric(defect));
    }
    let eig = match op.tridiagonal() {
        Some((d, o)) => {
            let sd: Vec<f64> = d.iter().zip(&rs).map(|(d, r)| d * r * r).collect();
            let so: Vec<f64> = o
                .iter()
                .enumerate()
                .map(|(i, o)| o * rs[i] * rs[i + 1])
                .collect();
            tridiagonal_eigen(&sd, &so)?
        }
        None => {
            let mut s = k;
            for r in 0..size {
                for c in 0..size {
                    s[r * size + c] *= rs[r] * rs[c];
                }
            }
            symmetric_eigen(&s, size)?
        }
    };
    let pairs = (0..n)
        .map(|m| {
            let mut v: Vec<f64> = eig.vector(m).iter().zip(&rs).map(|(y, r)| y * r).collect();
            let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let lead = v
                .iter()
                .find(|x| x.abs() > 1e-8 * peak)
                .copied()
                .unwrap_or(1.0);
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            EigenPair {
                index: m + 1,
                mu: eig.values[m],
                psi: v,
                analytic: None,
            }
        })
        .collect();
    Spectrum::new(
        dom.clone(),
        lam.clone(),
        SpectrumMethod::FiniteDifference,
        pairs,
        w,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robin_spectrum::LambdaTrace;

    #[test]
    fn stiffness_is_symmetric_with_variable_lambda() {
        let dom = Domain::rectangle(1.0, 2.0, 9, 10).unwrap();
        let lam = RobinCoefficient::faces(1.0, 2.0, 0.5, 3.0).with_face(
            Face::Top,
            LambdaTrace::Sampled((0..9).map(|i| 1.0 + 0.1 * i as f64).collect()),
        );
        let op = RobinStiffness::new(&dom, &lam).unwrap();
        assert!(asymmetry(&op.dense(), dom.len()) < 1e-14);
    }

    #[test]
    fn lift_load_reproduces_constant() {
        // Λ ≡ c solves the discrete problem with b = λc
        let dom = Domain::rectangle(1.0, 1.0, 9, 9).unwrap();
        let lam = RobinCoefficient::faces(1.0, 2.0, 3.0, 4.0);
        let op = RobinStiffness::new(&dom, &lam).unwrap();
        let c = 0.75;
        let b = lam
            .trace(&dom)
            .map2(&BoundaryTrace::zeros(&dom), |l, _| l * c);
        let r = op.boundary_load(&b);
        let mut ku = vec![0.0; dom.len()];
        op.apply(&vec![c; dom.len()], &mut ku);
        for (a, b) in ku.iter().zip(&r) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_positive_and_vectors_orthonormal() {
        let dom = Domain::rectangle(1.0, 1.0, 10, 10).unwrap();
        let s = eigen_fd(&dom, &RobinCoefficient::uniform(0.5), 12).unwrap();
        assert!(s.pairs.iter().all(|p| p.mu > 0.0));
        let g = s.gram(12);
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let e = if a == b { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-11);
            }
        }
    }
}
