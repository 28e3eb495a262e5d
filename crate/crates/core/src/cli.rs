//! Command-line front end: configuration, orchestration and CSV output.
//!
//! Every output file starts with comment lines carrying the tool version,
//! the SHA-256 of the configuration file, the seed and the subcommand, so
//! identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::{info, warn};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::catalog::{parse_list, BoundarySpec, Scenario};
use crate::fd_oracle::{compare, solve_fd, FdConfig};
use crate::frac_calculus::FracOrder;
use crate::mesh::Domain;
use crate::principles::{
    extremum_caputo_check, grading_stability, hopf_normal_check, mu_star_scan, strong_positivity_check,
    suite, weak_max_check, write_verdict_csv, Extremum, HalfBallRegion, Status, Verdict,
};
use crate::robin_spectrum::cache::{write_atomic, CacheStatus, EigenCache};
use crate::robin_spectrum::{RobinCoefficient, Spectrum, SpectrumMethod};
use crate::spectral_solver::{residual, solve, write_field_csv, SolutionField};

/// Process exit statuses.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const ERROR: u8 = 2;
    pub const NOTHING_APPLICABLE: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "fracrobin", version, about = "Time-fractional diffusion with Robin boundary conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `[output] dir`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized suites (overrides `[checks] seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Eigenpair cache directory (overrides `[output] cache`).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalues of the Robin Laplacian: `eigen.csv`.
    Eigen,
    /// Spectral solve: `field.csv`, `residual.csv`.
    Solve,
    /// Finite-difference oracle and comparison: `oracle.csv`, `compare.csv`.
    Oracle,
    /// Principle checks: `verdict.csv` (and `hopf_scan.csv`).
    Verify,
    /// Refinement ladder: `converge.csv`.
    Converge,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Eigen => "eigen",
            Command::Solve => "solve",
            Command::Oracle => "oracle",
            Command::Verify => "verify",
            Command::Converge => "converge",
        }
    }
}

// ------------------------------------------------------------ config

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub converge: Option<ConvergeSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub alpha: f64,
    #[serde(default = "one")]
    pub t_final: f64,
    /// `interval` or `rectangle`.
    #[serde(default = "interval")]
    pub domain: String,
    #[serde(default = "unit_lengths")]
    pub lengths: Vec<f64>,
    /// One constant per face: left, right[, bottom, top].
    pub lambda: Vec<f64>,
    #[serde(default = "zero")]
    pub u0: String,
    #[serde(default = "zero")]
    pub f: String,
    #[serde(default = "zero")]
    pub g: String,
    #[serde(default = "zero")]
    pub b_left: String,
    #[serde(default = "zero")]
    pub b_right: String,
    #[serde(default = "zero")]
    pub b_bottom: String,
    #[serde(default = "zero")]
    pub b_top: String,
    #[serde(default = "const_one")]
    pub b_time: String,
    #[serde(default = "yes")]
    pub enforce_compatibility: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub modes: usize,
    pub steps: usize,
    /// Nodes per axis.
    pub nodes: Vec<usize>,
    /// `auto`, `analytic` or `fd`.
    pub eigen: String,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            modes: 64,
            steps: 256,
            nodes: vec![257],
            eigen: "auto".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChecksSection {
    /// Any of `weak_max`, `strong_positivity`, `hopf_max`, `hopf_min`,
    /// `extremum_caputo`, `hopf_scan`, `nonnegative_suite`, `positive_suite`.
    pub select: Vec<String>,
    /// Tolerances, relative to `max(‖u‖∞, 1)`.
    pub weak_tol: f64,
    pub strong_tol: f64,
    pub hopf_tol: f64,
    pub caputo_tol: f64,
    pub seed: u64,
    pub suite_count: usize,
    pub suite_modes: usize,
    pub suite_steps: usize,
    pub hopf_dim: usize,
    pub hopf_radius: f64,
}

impl Default for ChecksSection {
    fn default() -> Self {
        Self {
            select: ["weak_max", "strong_positivity", "hopf_max", "hopf_min", "extremum_caputo"]
                .map(String::from)
                .to_vec(),
            weak_tol: 1e-8,
            strong_tol: 1e-12,
            hopf_tol: 1e-8,
            caputo_tol: 1e-6,
            seed: 0,
            suite_count: 50,
            suite_modes: 32,
            suite_steps: 128,
            hopf_dim: 1,
            hopf_radius: 0.01,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSection {
    /// `fd_time`, `fd_space`, `spectral_time` or `spectral_modes`.
    pub ladder: String,
    pub levels: Vec<usize>,
    /// Reference level (same unit as `levels`).
    pub reference: usize,
}

fn one() -> f64 {
    1.0
}
fn interval() -> String {
    "interval".into()
}
fn unit_lengths() -> Vec<f64> {
    vec![1.0]
}
fn zero() -> String {
    "zero".into()
}
fn const_one() -> String {
    "const:1".into()
}
fn yes() -> bool {
    true
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("invalid configuration")?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<Domain> {
        self.domain_with(&self.solver.nodes)
    }

    fn domain_with(&self, nodes: &[usize]) -> Result<Domain> {
        let p = &self.problem;
        Ok(match (p.domain.as_str(), p.lengths.as_slice(), nodes) {
            ("interval", [l], [n]) => Domain::interval(*l, *n)?,
            ("rectangle", [lx, ly], [nx, ny]) => Domain::rectangle(*lx, *ly, *nx, *ny)?,
            ("interval" | "rectangle", _, _) => {
                bail!("`{}` needs one length and one node count per axis", p.domain)
            }
            (other, _, _) => bail!("unknown domain `{other}` (expected `interval` or `rectangle`)"),
        })
    }

    pub fn lambda(&self) -> Result<RobinCoefficient> {
        Ok(match (self.problem.domain.as_str(), self.problem.lambda.as_slice()) {
            ("interval", [l, r]) => RobinCoefficient::interval(*l, *r),
            ("rectangle", [l, r, b, t]) => RobinCoefficient::faces(*l, *r, *b, *t),
            (d, v) => bail!("`{d}` needs one λ per face, got {}", v.len()),
        })
    }

    pub fn scenario_on(&self, domain: Domain) -> Result<Scenario> {
        let p = &self.problem;
        let mut s = Scenario::new(p.alpha, p.t_final, domain, self.lambda()?);
        s.u0 = parse_list(&p.u0).context("[problem] u0")?;
        s.f = parse_list(&p.f).context("[problem] f")?;
        s.g = parse_list(&p.g).context("[problem] g")?;
        s.b = BoundarySpec {
            left: parse_list(&p.b_left).context("[problem] b_left")?,
            right: parse_list(&p.b_right).context("[problem] b_right")?,
            bottom: parse_list(&p.b_bottom).context("[problem] b_bottom")?,
            top: parse_list(&p.b_top).context("[problem] b_top")?,
            time: parse_list(&p.b_time).context("[problem] b_time")?,
        };
        s.enforce_compatibility = p.enforce_compatibility;
        Ok(s)
    }

    fn method(&self, lam: &RobinCoefficient, dom: &Domain) -> Result<SpectrumMethod> {
        Ok(match self.solver.eigen.as_str() {
            "auto" if lam.is_piecewise_constant(dom) => SpectrumMethod::Analytic,
            "auto" | "fd" => SpectrumMethod::FiniteDifference,
            "analytic" => SpectrumMethod::Analytic,
            other => bail!("unknown eigen method `{other}` (auto, analytic, fd)"),
        })
    }
}

// ------------------------------------------------------------ context

struct Session {
    cfg: RunConfig,
    command: Command,
    out: PathBuf,
    cache: EigenCache,
    seed: u64,
    header: Vec<String>,
}

impl Session {
    fn new(cli: &Cli) -> Result<Self> {
        let path = cli.config.as_ref().context("--config <path> is required")?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg = RunConfig::parse(&text)?;
        let out = cli
            .out
            .clone()
            .or_else(|| cfg.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        let cache_dir = cli
            .cache
            .clone()
            .or_else(|| cfg.output.cache.clone())
            .unwrap_or_else(|| out.join("eigen-cache"));
        let seed = cli.seed.unwrap_or(cfg.checks.seed);
        let header = vec![
            format!("version={}", env!("CARGO_PKG_VERSION")),
            format!("config_sha256={}", hex::encode(Sha256::digest(text.as_bytes()))),
            format!("seed={seed}"),
            format!("command={}", cli.command.name()),
        ];
        Ok(Self {
            cfg,
            command: cli.command,
            out,
            cache: EigenCache::new(cache_dir),
            seed,
            header,
        })
    }

    fn basis(&self, dom: &Domain, n: usize) -> Result<Spectrum> {
        let lam = self.cfg.lambda()?;
        let method = self.cfg.method(&lam, dom)?;
        let (spec, status) = self.cache.load_or_compute(dom, &lam, n, method)?;
        match status {
            CacheStatus::Hit => info!("eigenpairs loaded from cache"),
            CacheStatus::Miss => info!("eigenpairs computed and cached"),
            CacheStatus::Recomputed => warn!("corrupt eigen cache entry replaced"),
        }
        Ok(spec)
    }

    fn write(&self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.out.join(name);
        write_atomic(&path, body).with_context(|| format!("writing {}", path.display()))?;
        info!("wrote {}", path.display());
        Ok(path)
    }

    fn csv(&self, kind: &str, extra: &[String], rows: &str) -> String {
        let mut s = format!("# fracrobin-{kind} v1\n");
        for h in self.header.iter().chain(extra) {
            let _ = writeln!(s, "# {h}");
        }
        s.push_str(rows);
        s
    }

    /// Spectral solve of the configured problem on the configured mesh.
    fn spectral(&self) -> Result<(crate::problem::ProblemSpec, SolutionField)> {
        let dom = self.cfg.domain()?;
        let scenario = self.cfg.scenario_on(dom.clone())?;
        let basis = self.basis(&dom, self.cfg.solver.modes)?;
        let spec = scenario.build(Some(&basis))?;
        let field = solve(&spec, &basis, self.cfg.solver.steps)?;
        Ok((spec, field))
    }
}

fn field_text(field: &SolutionField, header: &[String]) -> Result<String> {
    let mut buf = Vec::new();
    write_field_csv(field, header, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

// ------------------------------------------------------------ commands

/// Runs one subcommand and returns the process exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    let ctx = Session::new(cli)?;
    match ctx.command {
        Command::Eigen => cmd_eigen(&ctx),
        Command::Solve => cmd_solve(&ctx),
        Command::Oracle => cmd_oracle(&ctx),
        Command::Verify => cmd_verify(&ctx),
        Command::Converge => cmd_converge(&ctx),
    }
}

fn cmd_eigen(ctx: &Session) -> Result<u8> {
    let dom = ctx.cfg.domain()?;
    ctx.cfg.lambda()?.validate(&dom)?;
    let basis = ctx.basis(&dom, ctx.cfg.solver.modes)?;
    let mut rows = String::from("n,mu\n");
    for p in &basis.pairs {
        let _ = writeln!(rows, "{},{:.16e}", p.index, p.mu);
    }
    let extra = [format!("method={}", basis.method.name())];
    ctx.write("eigen.csv", &ctx.csv("eigen", &extra, &rows))?;
    Ok(exit::PASS)
}

fn cmd_solve(ctx: &Session) -> Result<u8> {
    let (spec, field) = ctx.spectral()?;
    ctx.write("field.csv", &field_text(&field, &ctx.header)?)?;
    let r = residual(&field, &spec)?;
    let rows = format!(
        "interior_max,interior_l2,boundary_max,boundary_l2\n{:.16e},{:.16e},{:.16e},{:.16e}\n",
        r.interior_max, r.interior_l2, r.boundary_max, r.boundary_l2
    );
    let extra = [
        format!("modes={}", field.modes_used),
        format!("u0_tail={:.6e}", field.truncation.u0_tail),
        format!("f_tail={:.6e}", field.truncation.f_tail),
    ];
    ctx.write("residual.csv", &ctx.csv("residual", &extra, &rows))?;
    Ok(exit::PASS)
}

fn cmd_oracle(ctx: &Session) -> Result<u8> {
    let dom = ctx.cfg.domain()?;
    let scenario = ctx.cfg.scenario_on(dom.clone())?;
    let basis = ctx.basis(&dom, ctx.cfg.solver.modes)?;
    let spec = scenario.build(Some(&basis))?;
    let fd = solve_fd(&spec, &FdConfig::new(dom.nx(), ctx.cfg.solver.steps))?;
    ctx.write("oracle.csv", &field_text(&fd, &ctx.header)?)?;
    let spectral = solve(&spec, &basis, ctx.cfg.solver.steps)?;
    let c = compare(&spectral, &fd)?;
    let rows = format!(
        "abs_l2l2,rel_l2l2,abs_max,rel_max\n{:.16e},{:.16e},{:.16e},{:.16e}\n",
        c.abs_l2l2, c.rel_l2l2, c.abs_max, c.rel_max
    );
    ctx.write("compare.csv", &ctx.csv("compare", &[], &rows))?;
    Ok(exit::PASS)
}

fn scale(field: &SolutionField) -> f64 {
    field.max_abs().max(1.0)
}

fn field_checks(ctx: &Session, names: &[&str]) -> Result<Vec<Verdict>> {
    let (spec, field) = ctx.spectral()?;
    let s = scale(&field);
    let c = &ctx.cfg.checks;
    Ok(names
        .iter()
        .map(|n| match *n {
            "weak_max" => weak_max_check(&field, &spec, c.weak_tol * s),
            "strong_positivity" => strong_positivity_check(&field, &spec, c.strong_tol * s),
            "hopf_max" => hopf_normal_check(&field, c.hopf_tol * s, Extremum::Max),
            "hopf_min" => hopf_normal_check(&field, c.hopf_tol * s, Extremum::Min),
            "extremum_caputo" => extremum_caputo_check(&field, spec.alpha, c.caputo_tol * s),
            _ => unreachable!(),
        })
        .collect())
}

fn suite_checks(ctx: &Session, positive: bool) -> Result<Vec<Verdict>> {
    let c = &ctx.cfg.checks;
    let dom = ctx.cfg.domain()?;
    let lam = ctx.cfg.lambda()?;
    let basis = ctx.basis(&dom, c.suite_modes)?;
    let scenarios = if positive {
        suite::strong_positive(ctx.seed, c.suite_count, &dom, &lam, &basis)
    } else {
        suite::random_nonnegative(ctx.seed, c.suite_count, &dom, &lam, &basis)
    };
    scenarios
        .iter()
        .enumerate()
        .map(|(i, sc)| {
            let spec = sc.build(Some(&basis))?;
            let field = solve(&spec, &basis, c.suite_steps)?;
            let s = scale(&field);
            let mut v = if positive {
                strong_positivity_check(&field, &spec, c.strong_tol * s)
            } else {
                weak_max_check(&field, &spec, c.weak_tol * s)
            };
            v.check = format!("{}[{i}]", v.check);
            Ok(v)
        })
        .collect()
}

fn hopf_scan_check(ctx: &Session) -> Result<Verdict> {
    let c = &ctx.cfg.checks;
    let a = FracOrder::new(ctx.cfg.problem.alpha)?;
    let region = HalfBallRegion::new(c.hopf_dim, c.hopf_radius, a);
    let scan = mu_star_scan(&region, a)?;
    let mut rows = String::from("mu,max_scaled_l_alpha_h,negative\n");
    for (mu, m) in &scan.table {
        let _ = writeln!(rows, "{mu:.16e},{m:.16e},{}", *m < 0.0);
    }
    let extra = [
        format!("dim={} radius={:e} t0={:e} delta={}", region.dim, region.radius, region.t0, region.delta),
        format!("mu_star={}", scan.mu_star.map_or("none".into(), |m| format!("{m:e}"))),
    ];
    ctx.write("hopf_scan.csv", &ctx.csv("hopf-scan", &extra, &rows))?;
    let Some(mu_star) = scan.mu_star else {
        let worst = scan.table.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        return Ok(Verdict {
            check: "hopf_scan".into(),
            status: Status::Fail,
            witness: None,
            margin: -worst,
            tol: 0.05,
            note: "no μ ≤ 2^20 with three consecutive negative maxima".into(),
        });
    };
    let mut stability = 0.0f64;
    let mut worst_max = f64::NEG_INFINITY;
    for k in 0..3 {
        let mu = mu_star * f64::from(1 << k);
        stability = stability.max(grading_stability(&region, mu, a)?);
        worst_max = worst_max.max(scan.table.iter().find(|r| r.0 == mu).map_or(f64::INFINITY, |r| r.1));
    }
    let ok = worst_max < 0.0 && stability <= 0.05;
    Ok(Verdict {
        check: "hopf_scan".into(),
        status: if ok { Status::Pass } else { Status::Fail },
        witness: None,
        margin: 0.05 - stability,
        tol: 0.05,
        note: format!("mu_star={mu_star:e}, grading change {stability:.3e}"),
    })
}

fn cmd_verify(ctx: &Session) -> Result<u8> {
    let select = &ctx.cfg.checks.select;
    let mut field_names = Vec::new();
    let mut verdicts = Vec::new();
    for name in select {
        match name.as_str() {
            "weak_max" | "strong_positivity" | "hopf_max" | "hopf_min" | "extremum_caputo" => {
                field_names.push(name.as_str())
            }
            "hopf_scan" | "nonnegative_suite" | "positive_suite" => {}
            other => bail!("unknown check `{other}`"),
        }
    }
    if !field_names.is_empty() {
        verdicts.extend(field_checks(ctx, &field_names)?);
    }
    for name in select {
        match name.as_str() {
            "hopf_scan" => verdicts.push(hopf_scan_check(ctx)?),
            "nonnegative_suite" => verdicts.extend(suite_checks(ctx, false)?),
            "positive_suite" => verdicts.extend(suite_checks(ctx, true)?),
            _ => {}
        }
    }
    for v in &verdicts {
        if !v.note.is_empty() {
            info!("{} {}: {}", v.check, v.status.name(), v.note);
        }
    }
    let dim = ctx.cfg.domain()?.dim();
    let mut buf = Vec::new();
    write_verdict_csv(&verdicts, dim, &ctx.header, &mut buf)?;
    ctx.write("verdict.csv", &String::from_utf8(buf)?)?;

    let applicable: Vec<&Verdict> = verdicts.iter().filter(|v| v.status != Status::Inapplicable).collect();
    Ok(if applicable.is_empty() {
        eprintln!("no applicable checks: the hypotheses of every selected check are unmet");
        exit::NOTHING_APPLICABLE
    } else if applicable.iter().all(|v| v.passed()) {
        exit::PASS
    } else {
        exit::FAIL
    })
}

/// Least-squares slope of `log e` against `−log n`.
fn fitted_order(params: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = params.iter().map(|p| -(*p as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn cmd_converge(ctx: &Session) -> Result<u8> {
    let conv = ctx.cfg.converge.as_ref().context("a [converge] section is required")?;
    if conv.levels.len() < 3 {
        bail!("a convergence ladder needs at least 3 levels, got {}", conv.levels.len());
    }
    let cfg = &ctx.cfg;
    let nodes = &cfg.solver.nodes;
    let run = |level: usize| -> Result<SolutionField> {
        let (dom, steps, modes) = match conv.ladder.as_str() {
            "fd_time" | "spectral_time" => (cfg.domain()?, level, cfg.solver.modes),
            "fd_space" => (cfg.domain_with(&vec![level; nodes.len()])?, cfg.solver.steps, cfg.solver.modes),
            "spectral_modes" => (cfg.domain()?, cfg.solver.steps, level),
            other => bail!("unknown ladder `{other}` (fd_time, fd_space, spectral_time, spectral_modes)"),
        };
        let scenario = cfg.scenario_on(dom.clone())?;
        let basis = ctx.basis(&dom, modes.max(scenario_modes(&scenario)))?;
        let spec = scenario.build(Some(&basis))?;
        if conv.ladder.starts_with("fd") {
            Ok(solve_fd(&spec, &FdConfig::new(dom.nx(), steps))?)
        } else {
            let basis = basis.truncated(modes)?;
            Ok(solve(&spec, &basis, steps)?)
        }
    };
    let reference = run(conv.reference)?;
    let mut errors = Vec::new();
    let mut rows = String::from("level,param,abs_l2l2,rel_l2l2,observed_order\n");
    for (i, level) in conv.levels.iter().enumerate() {
        let c = compare(&run(*level)?, &reference)?;
        let order = if i == 0 {
            String::new()
        } else {
            let prev: (usize, f64) = (conv.levels[i - 1], errors[i - 1]);
            format!("{:.6}", (prev.1 / c.abs_l2l2).ln() / (*level as f64 / prev.0 as f64).ln())
        };
        let _ = writeln!(rows, "{i},{level},{:.16e},{:.16e},{order}", c.abs_l2l2, c.rel_l2l2);
        errors.push(c.abs_l2l2);
    }
    let extra = [
        format!("ladder={} reference={}", conv.ladder, conv.reference),
        format!("fitted_order={:.6}", fitted_order(&conv.levels, &errors)),
    ];
    ctx.write("converge.csv", &ctx.csv("converge", &extra, &rows))?;
    Ok(exit::PASS)
}

/// Highest `mode:n` referenced by a scenario.
fn scenario_modes(s: &Scenario) -> usize {
    s.u0.iter()
        .chain(&s.f)
        .filter_map(|p| match p {
            crate::catalog::SpaceProfile::Mode { n, .. } => Some(*n),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

/// Parses arguments, runs, and maps errors to [`exit::ERROR`].
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::ERROR } else { exit::PASS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::ERROR
        }
    }
}
