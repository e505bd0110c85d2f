//! Convergence studies over a sequence of mesh levels.
//!
//! Configs are flat `key = value` text (`#` starts a comment). Recognized keys:
//! `mode`, `kind`, `beta_minus`, `beta_plus`, `r0`, `a`, `levels` (comma
//! separated), `solver_tol`, `output`, `seed`, `allow_large`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::assembly::{apply_dirichlet, assemble, solve, SparseSystem};
use crate::element::{Coefficient, DofKind};
use crate::error::{IfeError, Result};
use crate::interpolation::interpolate;
use crate::mesh::CartesianMesh;
use crate::norms::{level_errors, ErrorReport, ExactSolution, BENCHMARK_A, BENCHMARK_R0};
use crate::space::IfeSpace;

/// Largest level allowed without `allow_large`.
pub const DESK_MAX_LEVEL: usize = 160;

pub const CSV_HEADER: &str = "N,linf,linf_rate,l2,l2_rate,h1,h1_rate,solve_iters,seconds";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Interpolation error of the exact solution.
    Interp,
    /// Error of the Galerkin solution.
    Galerkin,
}

impl FromStr for Mode {
    type Err = IfeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "interp" | "interpolation" => Ok(Mode::Interp),
            "galerkin" => Ok(Mode::Galerkin),
            other => Err(IfeError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Interp => "interp",
            Mode::Galerkin => "galerkin",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub mode: Mode,
    pub kind: DofKind,
    pub beta_minus: f64,
    pub beta_plus: f64,
    pub r0: f64,
    pub a: f64,
    pub levels: Vec<usize>,
    pub solver_tol: f64,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    /// Permits levels above [`DESK_MAX_LEVEL`].
    pub allow_large: bool,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            mode: Mode::Galerkin,
            kind: DofKind::Integral,
            beta_minus: 1.0,
            beta_plus: 10.0,
            r0: BENCHMARK_R0,
            a: BENCHMARK_A,
            levels: vec![10, 20, 40, 80, 160],
            solver_tol: 1e-12,
            output_path: None,
            seed: 0,
            allow_large: false,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| IfeError::Config(format!("invalid value '{value}' for '{key}'")))
}

pub fn parse_levels(value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num("levels", s))
        .collect()
}

impl StudyConfig {
    pub fn new(mode: Mode, kind: DofKind, beta_minus: f64, beta_plus: f64) -> Self {
        StudyConfig {
            mode,
            kind,
            beta_minus,
            beta_plus,
            ..Default::default()
        }
    }

    pub fn with_levels(mut self, levels: &[usize]) -> Self {
        self.levels = levels.to_vec();
        self
    }

    /// Sets one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "mode" => self.mode = value.parse()?,
            "kind" => self.kind = value.parse()?,
            "beta_minus" => self.beta_minus = parse_num(key, value)?,
            "beta_plus" => self.beta_plus = parse_num(key, value)?,
            "r0" => self.r0 = parse_num(key, value)?,
            "a" => self.a = parse_num(key, value)?,
            "levels" => self.levels = parse_levels(value)?,
            "solver_tol" | "tol" => self.solver_tol = parse_num(key, value)?,
            "output" | "out" => self.output_path = Some(PathBuf::from(value)),
            "seed" => self.seed = parse_num(key, value)?,
            "allow_large" => self.allow_large = parse_num(key, value)?,
            other => return Err(IfeError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn merge_kv(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| IfeError::Parse {
                path: origin.to_path_buf(),
                line: lineno + 1,
                message: format!("expected key = value, got '{line}'"),
            })?;
            self.set(key, value).map_err(|e| IfeError::Parse {
                path: origin.to_path_buf(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| IfeError::io(path, e))?;
        let mut cfg = StudyConfig::default();
        cfg.merge_kv(&text, path)?;
        Ok(cfg)
    }

    pub fn coefficient(&self) -> Result<Coefficient> {
        Coefficient::new(self.beta_minus, self.beta_plus)
    }

    pub fn exact(&self) -> Result<ExactSolution> {
        Ok(ExactSolution::new(self.r0, self.a, self.coefficient()?))
    }

    pub fn validate(&self) -> Result<()> {
        self.coefficient()?;
        if self.levels.is_empty() {
            return Err(IfeError::Config("no mesh levels given".into()));
        }
        if self.levels[0] < 2 {
            return Err(IfeError::Config("mesh levels must be at least 2".into()));
        }
        if let Some(w) = self.levels.windows(2).find(|w| w[1] != 2 * w[0]) {
            return Err(IfeError::Config(format!(
                "levels must double: {} is followed by {}",
                w[0], w[1]
            )));
        }
        let top = *self.levels.last().unwrap();
        if top > DESK_MAX_LEVEL && !self.allow_large {
            return Err(IfeError::Config(format!(
                "level {top} exceeds {DESK_MAX_LEVEL}; enable allow_large to run it"
            )));
        }
        if !(self.r0 > 0.0 && self.r0 < 1.0) {
            return Err(IfeError::Config(format!("r0 = {} must lie in (0, 1)", self.r0)));
        }
        if !(self.solver_tol > 0.0) {
            return Err(IfeError::Config("solver_tol must be positive".into()));
        }
        Ok(())
    }

    /// `key=value` lines describing the run.
    pub fn echo(&self) -> Vec<String> {
        let levels: Vec<String> = self.levels.iter().map(|n| n.to_string()).collect();
        let mut out = vec![
            format!("mode={}", self.mode),
            format!("kind={}", self.kind),
            format!("beta_minus={}", self.beta_minus),
            format!("beta_plus={}", self.beta_plus),
            format!("r0={}", self.r0),
            format!("a={}", self.a),
            format!("levels={}", levels.join(",")),
            format!("solver_tol={:e}", self.solver_tol),
            format!("seed={}", self.seed),
        ];
        if self.allow_large {
            out.push("allow_large=true".into());
        }
        out
    }
}

/// One row of a study.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRun {
    pub n: usize,
    pub seconds: f64,
    /// Conjugate gradient iterations (zero for interpolation studies).
    pub solve_iters: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub report: ErrorReport,
    pub runs: Vec<LevelRun>,
}

fn benchmark_system(space: &IfeSpace, exact: &ExactSolution) -> SparseSystem {
    let sys = assemble(space, &|p| exact.source(p));
    apply_dirichlet(sys, space, &|p| exact.value(p))
}

/// The constrained Galerkin system of the configured problem at level `n`.
pub fn galerkin_system(cfg: &StudyConfig, n: usize) -> Result<SparseSystem> {
    let exact = cfg.exact()?;
    let mesh = CartesianMesh::benchmark(n)?;
    let space = IfeSpace::new(mesh, &exact.interface(), exact.beta, cfg.kind)?;
    Ok(benchmark_system(&space, &exact))
}

/// Runs the study level by level.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let exact = cfg.exact()?;
    let beta = exact.beta;
    let circle = exact.interface();
    let mut report = ErrorReport::default();
    let mut runs = Vec::with_capacity(cfg.levels.len());
    for &n in &cfg.levels {
        let start = Instant::now();
        let with_level = |err: IfeError| match err {
            IfeError::HypothesisViolation { element, reason } => IfeError::HypothesisViolation {
                element,
                reason: format!("N = {n}: {reason}"),
            },
            other => other,
        };
        let mesh = CartesianMesh::benchmark(n)?;
        let space = IfeSpace::new(mesh, &circle, beta, cfg.kind).map_err(with_level)?;
        let (dofs, iters) = match cfg.mode {
            Mode::Interp => (interpolate(&space, &|p| exact.value(p)).values, 0),
            Mode::Galerkin => {
                let sys = benchmark_system(&space, &exact);
                let out = solve(&sys, cfg.solver_tol)?;
                (out.values, out.iterations)
            }
        };
        report.levels.push(level_errors(&space, &dofs, &exact));
        runs.push(LevelRun {
            n,
            seconds: start.elapsed().as_secs_f64(),
            solve_iters: iters,
        });
    }
    Ok(StudyResult {
        config: cfg.clone(),
        report,
        runs,
    })
}

fn fmt_opt(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.5e}")).unwrap_or_default()
}

/// The study as CSV text: `#`-prefixed config echo, then the header and one
/// row per level.
pub fn to_csv(res: &StudyResult) -> String {
    let mut s = String::new();
    for line in res.config.echo() {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "{CSV_HEADER}");
    let (linf_r, l2_r, h1_r) = (res.report.linf_rates(), res.report.l2_rates(), res.report.h1_rates());
    for (k, (lv, run)) in res.report.levels.iter().zip(&res.runs).enumerate() {
        let rate = |r: &[Option<f64>]| if k == 0 { None } else { r[k - 1] };
        let _ = writeln!(
            s,
            "{},{:.5e},{},{:.5e},{},{:.5e},{},{},{:.5e}",
            lv.n,
            lv.linf,
            fmt_opt(rate(&linf_r)),
            lv.l2,
            fmt_opt(rate(&l2_r)),
            lv.h1,
            fmt_opt(rate(&h1_r)),
            run.solve_iters,
            run.seconds
        );
    }
    s
}

pub fn emit_csv(res: &StudyResult, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv(res)).map_err(|e| IfeError::io(path, e))
}

/// A parsed CSV data row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub n: usize,
    pub linf: f64,
    pub linf_rate: Option<f64>,
    pub l2: f64,
    pub l2_rate: Option<f64>,
    pub h1: f64,
    pub h1_rate: Option<f64>,
    pub solve_iters: usize,
    pub seconds: f64,
}

/// Parses text written by [`to_csv`], skipping comment lines.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let origin = PathBuf::from("<csv>");
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            if line != CSV_HEADER {
                return Err(IfeError::Parse {
                    path: origin,
                    line: lineno + 1,
                    message: format!("unexpected header '{line}'"),
                });
            }
            seen_header = true;
            continue;
        }
        let bad = |message: String| IfeError::Parse {
            path: origin.clone(),
            line: lineno + 1,
            message,
        };
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            return Err(bad(format!("expected 9 columns, got {}", cells.len())));
        }
        let num = |i: usize| -> Result<f64> {
            cells[i].parse().map_err(|_| bad(format!("bad number '{}'", cells[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if cells[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        rows.push(CsvRow {
            n: cells[0].parse().map_err(|_| bad(format!("bad N '{}'", cells[0])))?,
            linf: num(1)?,
            linf_rate: opt(2)?,
            l2: num(3)?,
            l2_rate: opt(4)?,
            h1: num(5)?,
            h1_rate: opt(6)?,
            solve_iters: cells[7].parse().map_err(|_| bad(format!("bad count '{}'", cells[7])))?,
            seconds: num(8)?,
        });
    }
    Ok(rows)
}
