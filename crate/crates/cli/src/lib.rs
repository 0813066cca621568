//! Batch front end for `polydiff`: reads JSON set files, runs one library
//! operation and writes a JSON report or set file.

pub mod commands;
pub mod error;
pub mod format;
pub mod plot;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use polydiff::ToleranceConfig;
use serde_json::Value;

use crate::commands::{DiffOptions, ViForm};
use crate::error::{CliError, CliResult};
use crate::format::{to_canonical_string, SetDescriptor};

/// Environment variable holding the sampling seed.
pub const SEED_VAR: &str = "POLYDIFF_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "polydiff",
    version,
    about = "Minkowski differences of convex polyhedra"
)]
pub struct Cli {
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Constraint slack used in feasibility checks.
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().feas_tol)]
    pub feas_tol: f64,
    /// Optimality and duality-gap threshold.
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().opt_tol)]
    pub opt_tol: f64,
    /// Iteration cap for every solver.
    #[arg(long, global = true, default_value_t = ToleranceConfig::default().max_iter)]
    pub max_iter: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the difference A - B as a set file.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Remove generators that are not extreme points (hull minus hull).
        #[arg(long)]
        reduce: bool,
        /// Keep one row block per subtrahend generator (half-spaces minus hull).
        #[arg(long)]
        raw: bool,
        /// Write the planar outline of the result to this file.
        #[arg(long = "plot-2d", value_name = "FILE")]
        plot_2d: Option<PathBuf>,
    },
    /// Distance between A and B with a pair of nearest points.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separability verdict and separating hyperplane for A and B.
    Separate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Where the origin lies relative to a set.
    Classify {
        set: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Projection of the origin onto A, or onto A - B when B is given.
    Project {
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variational inequalities over A - B.
    Vi {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = ViForm::All)]
        form: ViForm,
        /// Right-hand side of the strong form.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Diff { .. } => "diff",
            Command::Distance { .. } => "distance",
            Command::Separate { .. } => "separate",
            Command::Classify { .. } => "classify",
            Command::Project { .. } => "project",
            Command::Vi { .. } => "vi",
        }
    }

    fn out(&self) -> Option<&Path> {
        match self {
            Command::Diff { out, .. }
            | Command::Distance { out, .. }
            | Command::Separate { out, .. }
            | Command::Classify { out, .. }
            | Command::Project { out, .. }
            | Command::Vi { out, .. } => out.as_deref(),
        }
    }
}

fn settings(args: &ToleranceArgs, seed: Option<&str>) -> CliResult<ToleranceConfig> {
    let tol = ToleranceConfig::new(args.feas_tol, args.opt_tol, args.max_iter)?;
    Ok(match seed {
        None => tol,
        Some(s) => tol.with_seed(s.trim().parse().map_err(|_| {
            CliError::Parse(format!("{SEED_VAR} must be an unsigned integer, got {s:?}"))
        })?),
    })
}

fn load(path: &Path) -> CliResult<format::Operand> {
    SetDescriptor::read(path)?.to_operand()
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// The rendered document and whether it is certified.
fn execute(command: &Command, tol: &ToleranceConfig) -> CliResult<(String, bool)> {
    let report: Value = match command {
        Command::Diff {
            a,
            b,
            reduce,
            raw,
            plot_2d,
            ..
        } => {
            let opts = DiffOptions {
                reduce: *reduce,
                raw: *raw,
                plot: plot_2d.is_some(),
            };
            let out = commands::diff(&load(a)?, &load(b)?, opts, tol)?;
            if let (Some(path), Some(doc)) = (plot_2d, &out.plot) {
                std::fs::write(path, to_canonical_string(doc))?;
            }
            return Ok((SetDescriptor::from_operand(&out.set).to_canonical(), true));
        }
        Command::Distance { a, b, .. } => commands::distance_report(&load(a)?, &load(b)?, tol)?,
        Command::Separate { a, b, .. } => commands::separate(&load(a)?, &load(b)?, tol)?,
        Command::Classify { set, .. } => commands::classify(&load(set)?, tol)?,
        Command::Project { a, b, .. } => {
            let b = b.as_deref().map(load).transpose()?;
            commands::project(&load(a)?, b.as_ref(), tol)?
        }
        Command::Vi {
            a, b, form, delta, ..
        } => commands::vi(&load(a)?, &load(b)?, *form, *delta, tol)?,
    };
    let certified = report["certified"] != Value::Bool(false);
    Ok((to_canonical_string(&report), certified))
}

fn run_inner(cli: &Cli, seed: Option<&str>) -> CliResult<()> {
    let tol = settings(&cli.tolerances, seed)?;
    let out = cli.command.out();
    match execute(&cli.command, &tol) {
        Ok((text, true)) => emit(&text, out),
        Ok((text, false)) => {
            emit(&text, out)?;
            Err(CliError::Numerical {
                reason: "result not certified at the requested tolerances".into(),
                best: None,
            })
        }
        Err(CliError::Numerical { reason, best }) => {
            let doc = commands::failure(cli.command.name(), &reason, best, &tol);
            emit(&to_canonical_string(&doc), out)?;
            Err(CliError::Numerical { reason, best: None })
        }
        Err(e) => Err(e),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(cli: &Cli, seed: Option<&str>) -> i32 {
    match run_inner(cli, seed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
