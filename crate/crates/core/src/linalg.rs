//! Small dense and banded linear algebra kernels.
//!
//! Householder tridiagonalisation followed by implicit QL for symmetric
//! eigenproblems, the Thomas algorithm for tridiagonal systems and plain
//! conjugate gradients for the SPD systems assembled on rectangles.

use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero pivot at row {row} in tridiagonal solve")]
    ZeroPivot { row: usize },
    #[error("QL iteration did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },
    #[error("conjugate gradients stalled at relative residual {residual:e} after {iterations} iterations")]
    CgStalled { residual: f64, iterations: usize },
}

/// Symmetric eigen-decomposition: ascending eigenvalues and the matching
/// eigenvectors stored column-wise (`vectors[k * n + j]` is component `k`
/// of eigenvector `j`).
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<T>,
    pub n: usize,
}

impl<T: Real> SymEigen<T> {
    pub fn vector(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|k| self.vectors[k * self.n + j]).collect()
    }
}

/// Solves a tridiagonal system. `lower[i]` couples row `i+1` to column `i`,
/// `upper[i]` couples row `i` to column `i+1`.
pub fn solve_tridiagonal<T: Real>(
    lower: &[T],
    diag: &[T],
    upper: &[T],
    rhs: &[T],
) -> Result<Vec<T>, LinalgError> {
    let n = diag.len();
    if rhs.len() != n || lower.len() + 1 != n.max(1) || upper.len() + 1 != n.max(1) {
        return Err(LinalgError::Dimension(format!(
            "diag {n}, lower {}, upper {}, rhs {}",
            lower.len(),
            upper.len(),
            rhs.len()
        )));
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut beta = diag[0];
    if beta == T::zero() {
        return Err(LinalgError::ZeroPivot { row: 0 });
    }
    d[0] = rhs[0] / beta;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i - 1] * c[i - 1];
        if beta == T::zero() {
            return Err(LinalgError::ZeroPivot { row: i });
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / beta;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// Eigen-decomposition of a symmetric tridiagonal matrix.
pub fn tridiagonal_eigen<T: Real>(diag: &[T], offdiag: &[T]) -> Result<SymEigen<T>, LinalgError> {
    let n = diag.len();
    if offdiag.len() + 1 != n.max(1) {
        return Err(LinalgError::Dimension(format!(
            "diag {n}, offdiag {}",
            offdiag.len()
        )));
    }
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    if n > 1 {
        e[1..].copy_from_slice(offdiag);
    }
    tql2(n, &mut d, &mut e, &mut v)?;
    Ok(sort_eigen(n, d, v))
}

/// Eigen-decomposition of a dense symmetric matrix stored row-major.
pub fn symmetric_eigen<T: Real>(matrix: &[T], n: usize) -> Result<SymEigen<T>, LinalgError> {
    if matrix.len() != n * n {
        return Err(LinalgError::Dimension(format!(
            "{} entries for n = {n}",
            matrix.len()
        )));
    }
    if n == 0 {
        return Ok(SymEigen {
            values: vec![],
            vectors: vec![],
            n,
        });
    }
    let mut v = matrix.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut d, &mut e, &mut v)?;
    Ok(sort_eigen(n, d, v))
}

fn sort_eigen<T: Real>(n: usize, d: Vec<T>, v: Vec<T>) -> SymEigen<T> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&j| d[j]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new_j] = v[k * n + old_j];
        }
    }
    SymEigen { values, vectors, n }
}

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let at = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale = scale + d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
                v[at(j, i)] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] = d[k] / scale;
                h = h + d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g = g + v[at(k, j)] * d[k];
                    e[k] = e[k] + v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] = v[at(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g = g + v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] = v[at(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = T::zero();
    }
    v[at(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

// Implicit QL with Wilkinson-type shifts on the tridiagonal (d, e).
fn tql2<T: Real>(n: usize, d: &mut [T], e: &mut [T], v: &mut [T]) -> Result<(), LinalgError> {
    if n == 0 {
        return Ok(());
    }
    let at = |r: usize, c: usize| r * n + c;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 100 {
                    return Err(LinalgError::NoConvergence { index: l });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let hk = v[at(k, i + 1)];
                        v[at(k, i + 1)] = s * v[at(k, i)] + c * hk;
                        v[at(k, i)] = c * v[at(k, i)] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgSolution<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    pub relative_residual: T,
}

/// Conjugate gradients for an SPD operator given by `apply(x, out)`.
pub fn conjugate_gradient<T: Real, A: Fn(&[T], &mut [T])>(
    apply: A,
    rhs: &[T],
    rel_tol: T,
    max_iter: usize,
) -> Result<CgSolution<T>, LinalgError> {
    let n = rhs.len();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(x, y)| *x * *y).sum::<T>();
    let b_norm = dot(rhs, rhs).sqrt();
    let mut x = vec![T::zero(); n];
    if b_norm == T::zero() {
        return Ok(CgSolution {
            x,
            iterations: 0,
            relative_residual: T::zero(),
        });
    }
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![T::zero(); n];
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] = x[i] + alpha * p[i];
            r[i] = r[i] - alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= rel_tol * b_norm {
            // recompute the true residual to guard against drift
            apply(&x, &mut ap);
            let true_res = rhs
                .iter()
                .zip(&ap)
                .map(|(b, a)| (*b - *a) * (*b - *a))
                .sum::<T>()
                .sqrt()
                / b_norm;
            if true_res <= rel_tol * T::lit(10.0) {
                return Ok(CgSolution {
                    x,
                    iterations: it + 1,
                    relative_residual: true_res,
                });
            }
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    Err(LinalgError::CgStalled {
        residual: (rr.sqrt() / b_norm).to_f64_lossy(),
        iterations: max_iter,
    })
}

/// Lower Cholesky factor of a symmetric positive-definite matrix (row-major).
pub fn cholesky<T: Real>(matrix: &[T], n: usize) -> Result<Vec<T>, LinalgError> {
    if matrix.len() != n * n {
        return Err(LinalgError::Dimension(format!(
            "{} entries for order {n}",
            matrix.len()
        )));
    }
    let mut l = vec![T::zero(); n * n];
    for r in 0..n {
        for c in 0..=r {
            let mut s = matrix[r * n + c];
            for k in 0..c {
                s = s - l[r * n + k] * l[c * n + k];
            }
            if r == c {
                if !(s > T::zero()) {
                    return Err(LinalgError::ZeroPivot { row: r });
                }
                l[r * n + r] = s.sqrt();
            } else {
                l[r * n + c] = s / l[c * n + c];
            }
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` given the factor from [`cholesky`]. Only the leading
/// `b.len()` block of `l` (order `n`) is used.
pub fn cholesky_solve<T: Real>(l: &[T], n: usize, b: &[T]) -> Vec<T> {
    let m = b.len();
    let mut y = b.to_vec();
    for r in 0..m {
        let mut s = y[r];
        for k in 0..r {
            s = s - l[r * n + k] * y[k];
        }
        y[r] = s / l[r * n + r];
    }
    for r in (0..m).rev() {
        let mut s = y[r];
        for k in r + 1..m {
            s = s - l[k * n + r] * y[k];
        }
        y[r] = s / l[r * n + r];
    }
    y
}
