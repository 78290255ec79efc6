use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saddlegap_cli::commands::{
    self, parse_contrast, parse_inclusion, parse_load, parse_t_grid, GenKind, SweepArgs,
    DEFAULT_T_GRID,
};
use saddlegap_cli::{CliError, ExitStatus, Outcome};
use saddlegap_core::{JumpSpec, Load, RandomSpec, TolerancePolicy};

/// Solve and analyze degenerate symmetric saddle point problems.
///
/// Exit status: 0 ok, 1 input or numerical error, 2 inadmissible data,
/// 3 a verification check failed.
#[derive(Parser, Debug)]
#[command(name = "saddlegap", version)]
struct Cli {
    /// Tolerance for identity checks and subspace comparisons.
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the document here instead of standard output.
    #[arg(long = "report", visible_alias = "out", value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for σ and u.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Solve, compute all constants and run every check.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum gap between the column spans of two basis files.
    Gap {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Analyze the jump-coefficient family over a grid of contrasts.
    Sweep {
        #[command(flatten)]
        jump: JumpArgs,
        /// Comma-separated contrasts; `inf` is the exactly degenerate limit.
        #[arg(long, default_value = DEFAULT_T_GRID)]
        t_grid: String,
        #[command(flatten)]
        out: Output,
    },
    /// Write a generated problem file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        random: RandomArgs,
        #[command(flatten)]
        jump: JumpArgs,
        /// Contrast for `jump1d`; `inf` allowed.
        #[arg(long, default_value = "1")]
        t: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Random,
    Jump1d,
}

#[derive(Args, Debug)]
struct JumpArgs {
    #[arg(long, default_value_t = 8)]
    cells: usize,
    /// Inclusion cells as `a..b`.
    #[arg(long)]
    inclusion: Option<String>,
    /// uniform, inclusion or sine.
    #[arg(long, default_value = "uniform")]
    load: String,
    /// Constant coefficient everywhere.
    #[arg(long)]
    uniform: bool,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    rank_b: usize,
    #[arg(long, default_value_t = 4)]
    rank_a: usize,
    /// Dimension of N(A) ∩ N(B).
    #[arg(long, default_value_t = 1)]
    overlap: usize,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Put a component of g in N(A) ∩ N(B).
    #[arg(long)]
    inadmissible: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl JumpArgs {
    fn load(&self) -> Result<Load, CliError> {
        parse_load(&self.load)
    }

    fn inclusion(&self) -> Result<Option<std::ops::Range<usize>>, CliError> {
        self.inclusion.as_deref().map(parse_inclusion).transpose()
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: &Output, outcome: &Outcome) -> Result<(), CliError> {
    match &out.report {
        Some(path) => fs::write(path, &outcome.output).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(outcome.output.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Attaches the file name to parse errors.
fn in_file(path: &Path) -> impl Fn(CliError) -> CliError + '_ {
    move |e| match e {
        CliError::Parse(p) => CliError::Usage(format!("{}: parse error: {p}", path.display())),
        e => e,
    }
}

fn run(cli: Cli) -> Result<ExitStatus, CliError> {
    let tol = match cli.tol {
        Some(eps) => TolerancePolicy::with_identity_tol(eps)?,
        None => TolerancePolicy::default(),
    };
    let (outcome, out) = match &cli.command {
        Command::Solve { path, out } => (
            commands::solve(&read(path)?, &tol).map_err(in_file(path))?,
            out,
        ),
        Command::Analyze { path, out } => (
            commands::analyze(&read(path)?, &tol).map_err(in_file(path))?,
            out,
        ),
        Command::Gap { d, p, out } => {
            let dt = read(d)?;
            let pt = read(p)?;
            let o = commands::gap(&dt, &pt, &tol).map_err(|e| match e {
                CliError::Parse(pe) => {
                    CliError::Usage(format!("--d/--p basis file: parse error: {pe}"))
                }
                e => e,
            })?;
            (o, out)
        }
        Command::Sweep { jump, t_grid, out } => {
            let args = SweepArgs {
                cells: jump.cells,
                inclusion: jump.inclusion()?,
                t_grid: parse_t_grid(t_grid)?,
                load: jump.load()?,
                uniform: jump.uniform,
            };
            (commands::sweep(&args, &tol)?, out)
        }
        Command::Gen {
            kind,
            random,
            jump,
            t,
            out,
        } => {
            let kind = match kind {
                Kind::Random => GenKind::Random(RandomSpec {
                    scale: random.scale,
                    admissible_rhs: !random.inadmissible,
                    ..RandomSpec::new(
                        random.n,
                        random.m,
                        random.rank_b,
                        random.rank_a,
                        random.overlap,
                        random.seed,
                    )
                }),
                Kind::Jump1d => {
                    let mut spec = JumpSpec::new(jump.cells, parse_contrast(t)?);
                    if let Some(inc) = jump.inclusion()? {
                        spec.inclusion = inc;
                    }
                    spec.load = jump.load()?;
                    spec.uniform = jump.uniform;
                    GenKind::Jump(spec)
                }
            };
            (commands::gen(&kind)?, out)
        }
    };
    emit(out, &outcome)?;
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors map onto the input-error status.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code())
        }
    }
}
