//! `ife-study`: convergence studies for the circular-interface benchmark.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ife_core::study::{emit_csv, galerkin_system, run_study, to_csv};
use ife_core::{DofKind, IfeError, Mode, StudyConfig};

/// Runs an interpolation or Galerkin convergence study and prints a CSV table.
///
/// Values from `--config` are applied first; flags override them.
#[derive(Parser, Debug)]
#[command(name = "ife-study", version)]
struct Args {
    /// key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// interp or galerkin.
    #[arg(long)]
    mode: Option<Mode>,
    /// integral (edge means) or midpoint.
    #[arg(long)]
    kind: Option<DofKind>,
    /// Coefficient inside the circle
    #[arg(long)]
    beta_minus: Option<f64>,
    /// Coefficient outside the circle
    #[arg(long)]
    beta_plus: Option<f64>,
    /// Interface radius.
    #[arg(long)]
    r0: Option<f64>,
    /// Exponent of the exact solution.
    #[arg(long)]
    a: Option<f64>,
    /// Comma separated, each level double the previous, e.g. 10,20,40.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<usize>,
    /// Relative residual tolerance of the linear solver.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow levels above 160.
    #[arg(long)]
    allow_large: bool,
    /// Write the constrained Galerkin matrix of the first level as
    /// `row col value` triplets.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

fn build_config(args: &Args) -> Result<StudyConfig, IfeError> {
    let mut cfg = match &args.config {
        Some(path) => StudyConfig::from_file(path)?,
        None => StudyConfig::default(),
    };
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(k) = args.kind {
        cfg.kind = k;
    }
    if let Some(b) = args.beta_minus {
        cfg.beta_minus = b;
    }
    if let Some(b) = args.beta_plus {
        cfg.beta_plus = b;
    }
    if let Some(r) = args.r0 {
        cfg.r0 = r;
    }
    if let Some(a) = args.a {
        cfg.a = a;
    }
    if !args.levels.is_empty() {
        cfg.levels = args.levels.clone();
    }
    if let Some(t) = args.tol {
        cfg.solver_tol = t;
    }
    if let Some(o) = &args.out {
        cfg.output_path = Some(o.clone());
    }
    cfg.allow_large |= args.allow_large;
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(err: &IfeError) -> u8 {
    match err {
        IfeError::HypothesisViolation { .. } | IfeError::SingularLocalSystem { .. } => 2,
        IfeError::NoConvergence { .. } => 3,
        IfeError::Config(_) | IfeError::Parse { .. } | IfeError::Io { .. } => 1,
    }
}

fn run(args: &Args) -> Result<(), IfeError> {
    let cfg = build_config(args)?;
    if let Some(path) = &args.dump_matrix {
        galerkin_system(&cfg, cfg.levels[0])?.dump_matrix(path)?;
    }
    let res = run_study(&cfg)?;
    match &cfg.output_path {
        Some(path) => emit_csv(&res, path),
        None => {
            print!("{}", to_csv(&res));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on bad flags, which is reserved for interface failures.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
