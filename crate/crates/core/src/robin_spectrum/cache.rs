//! On-disk cache of computed spectra.
//!
//! Text format, one file per `(domain, λ, N, method)`:
//!
//! ```text
//! fracrobin-eigen v1
//! kind interval
//! lengths 1.0000000000000000e0
//! mesh 64
//! lambda left 1.0000000000000000e0
//! ...
//! count 10
//! method analytic
//! end
//! 1 <mu>
//! <psi samples, row-major>
//! 2 <mu>
//! ...
//! sha256 <digest of everything above>
//! ```
//!
//! Reals are written with 17 significant digits, which round-trips `f64`.
//! Files are named by the SHA-256 of the parameter block and written via a
//! temporary file and rename; writers in one process serialise on a mutex.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use log::warn;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{
    analytic::eigen_analytic, eigen_fd, EigenPair, LambdaTrace, RobinCoefficient, Spectrum,
    SpectrumError, SpectrumMethod,
};
use crate::mesh::{Domain, DomainKind};

pub const HEADER: &str = "fracrobin-eigen v1";

static WRITE_LOCK: Mutex<()> = Mutex::new(());
static TMP_COUNTER: AtomicUsize = AtomicUsize::new(0);

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A corrupt or mismatched file was replaced.
    Recomputed,
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parameter block identifying a spectrum; also the hash input.
pub fn parameter_block(
    dom: &Domain,
    lam: &RobinCoefficient,
    n: usize,
    method: SpectrumMethod,
) -> String {
    let mut s = String::new();
    let kind = match dom.kind() {
        DomainKind::Interval => "interval",
        DomainKind::Rectangle => "rectangle",
    };
    let _ = writeln!(s, "kind {kind}");
    let lengths: Vec<String> = dom.lengths().iter().map(|v| real(*v)).collect();
    let _ = writeln!(s, "lengths {}", lengths.join(" "));
    let mesh: Vec<String> = dom.mesh().iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "mesh {}", mesh.join(" "));
    for &face in dom.faces() {
        match lam.face(face) {
            LambdaTrace::Const(v) => {
                let _ = writeln!(s, "lambda {} {}", face.name(), real(*v));
            }
            LambdaTrace::Sampled(v) => {
                let vals: Vec<String> = v.iter().map(|x| real(*x)).collect();
                let _ = writeln!(s, "lambda {} sampled {}", face.name(), vals.join(" "));
            }
        }
    }
    let _ = writeln!(s, "count {n}");
    let _ = writeln!(s, "method {}", method.name());
    s
}

/// Serialises a spectrum in the cache format.
pub fn to_text(spec: &Spectrum) -> String {
    let mut s = String::from(HEADER);
    s.push('\n');
    s.push_str(&parameter_block(
        &spec.domain,
        &spec.lambda,
        spec.len(),
        spec.method,
    ));
    s.push_str("end\n");
    for p in &spec.pairs {
        let _ = writeln!(s, "{} {}", p.index, real(p.mu));
        let vals: Vec<String> = p.psi.iter().map(|v| real(*v)).collect();
        s.push_str(&vals.join(" "));
        s.push('\n');
    }
    let digest = hex::encode(Sha256::digest(s.as_bytes()));
    let _ = writeln!(s, "sha256 {digest}");
    s
}

/// Parses a cache file written for exactly these parameters.
pub fn from_text(
    text: &str,
    dom: &Domain,
    lam: &RobinCoefficient,
    n: usize,
    method: SpectrumMethod,
) -> Option<Spectrum> {
    let body_end = text.trim_end().rfind('\n')? + 1;
    let (body, trailer) = text.split_at(body_end);
    if trailer.trim_end() != format!("sha256 {}", hex::encode(Sha256::digest(body.as_bytes()))) {
        return None;
    }
    let mut lines = body.lines();
    if lines.next()? != HEADER {
        return None;
    }
    let block = parameter_block(dom, lam, n, method);
    for expected in block.lines() {
        if lines.next()? != expected {
            return None;
        }
    }
    if lines.next()? != "end" {
        return None;
    }
    let mut pairs = Vec::with_capacity(n);
    for m in 1..=n {
        let mut head = lines.next()?.split_whitespace();
        let index: usize = head.next()?.parse().ok()?;
        let mu: f64 = head.next()?.parse().ok()?;
        if index != m || head.next().is_some() || !mu.is_finite() {
            return None;
        }
        let psi: Vec<f64> = lines
            .next()?
            .split_whitespace()
            .map(|v| v.parse().ok())
            .collect::<Option<_>>()?;
        if psi.len() != dom.len() || psi.iter().any(|v| !v.is_finite()) {
            return None;
        }
        pairs.push(EigenPair {
            index,
            mu,
            psi,
            analytic: None,
        });
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return None;
    }
    Spectrum::new(dom.clone(), lam.clone(), method, pairs, method.weights(dom)).ok()
}

/// Computes a spectrum without the cache.
pub fn compute(
    dom: &Domain,
    lam: &RobinCoefficient,
    n: usize,
    method: SpectrumMethod,
) -> Result<Spectrum, SpectrumError> {
    match method {
        SpectrumMethod::Analytic => eigen_analytic(lam, dom, n),
        SpectrumMethod::FiniteDifference => eigen_fd(dom, lam, n),
    }
}

/// Directory-backed spectrum cache.
#[derive(Debug, Clone)]
pub struct EigenCache {
    dir: PathBuf,
}

impl EigenCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(
        &self,
        dom: &Domain,
        lam: &RobinCoefficient,
        n: usize,
        method: SpectrumMethod,
    ) -> PathBuf {
        let digest = Sha256::digest(parameter_block(dom, lam, n, method).as_bytes());
        self.dir
            .join(format!("eigen-{}.txt", &hex::encode(digest)[..24]))
    }

    pub fn load_or_compute(
        &self,
        dom: &Domain,
        lam: &RobinCoefficient,
        n: usize,
        method: SpectrumMethod,
    ) -> Result<(Spectrum, CacheStatus), CacheError> {
        lam.validate(dom)?;
        let path = self.path_for(dom, lam, n, method);
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match fs::read_to_string(&path)
                .ok()
                .and_then(|t| from_text(&t, dom, lam, n, method))
            {
                Some(s) => return Ok((s, CacheStatus::Hit)),
                None => {
                    warn!(
                        "eigen cache file {} is corrupt or stale; recomputing",
                        path.display()
                    );
                    status = CacheStatus::Recomputed;
                }
            }
        }
        let spec = compute(dom, lam, n, method)?;
        write_atomic(&path, &to_text(&spec))?;
        Ok((spec, status))
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let _guard = WRITE_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!(
        "tmp.{}.{}",
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}
