//! Subcommands as pure functions from input text to an [`Outcome`]; file
//! handling lives in the binary.

use std::ops::Range;

use saddlegap_core::{
    analyze as analyze_problem, build_split, jump_problem, min_gap, random_problem,
    solve as solve_problem, sweep as sweep_family, JumpSpec, Load, RandomSpec, Subspace,
    TolerancePolicy,
};
use thiserror::Error;

use crate::problem_file::{parse_basis, parse_sections, write_problem, ParseError};
use crate::report::{analysis_report, gap_block, solve_report, sweep_report, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok,
    Error,
    Inadmissible,
    CheckFailure,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::Error => 1,
            ExitStatus::Inadmissible => 2,
            ExitStatus::CheckFailure => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] saddlegap_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        ExitStatus::Error
    }
}

/// Document to write plus the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: ExitStatus,
}

pub fn solve(problem: &str, tol: &TolerancePolicy) -> Result<Outcome, CliError> {
    let p = parse_sections(problem)?.into_problem(tol)?;
    let split = build_split(&p, tol)?;
    let s = solve_problem(&p, &split, tol)?;
    let status = if s.admissible {
        ExitStatus::Ok
    } else {
        ExitStatus::Inadmissible
    };
    Ok(Outcome {
        output: solve_report(&p, &split, &s).render(),
        status,
    })
}

pub fn analyze(problem: &str, tol: &TolerancePolicy) -> Result<Outcome, CliError> {
    let p = parse_sections(problem)?.into_problem(tol)?;
    let an = analyze_problem(&p, tol)?;
    let status = if !an.solution.admissible {
        ExitStatus::Inadmissible
    } else if !an.report.all_passed() {
        ExitStatus::CheckFailure
    } else {
        ExitStatus::Ok
    };
    Ok(Outcome {
        output: analysis_report(&p, &an).render(),
        status,
    })
}

/// Minimum gap between the column spans of two basis files.
pub fn gap(d: &str, p: &str, tol: &TolerancePolicy) -> Result<Outcome, CliError> {
    let ds = Subspace::span(&parse_basis(d)?, tol)?;
    let ps = Subspace::span(&parse_basis(p)?, tol)?;
    let g = min_gap(&ds, &ps, tol)?;
    let mut r = Report::new();
    r.field("gap.dim_D", ds.dim());
    r.field("gap.dim_P", ps.dim());
    gap_block(&mut r, "gap.", &g);
    let consistent = g.consistent(tol);
    r.field("gap.consistent", consistent);
    let status = if consistent {
        ExitStatus::Ok
    } else {
        ExitStatus::CheckFailure
    };
    Ok(Outcome {
        output: r.render(),
        status,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepArgs {
    pub cells: usize,
    /// Defaults to [`JumpSpec::default_inclusion`].
    pub inclusion: Option<Range<usize>>,
    pub t_grid: Vec<f64>,
    pub load: Load,
    pub uniform: bool,
}

pub const DEFAULT_T_GRID: &str = "1,1e2,1e4,1e6,1e8,inf";

impl SweepArgs {
    fn jump_spec(&self, t: f64) -> JumpSpec {
        let mut spec = JumpSpec::new(self.cells, t);
        if let Some(inc) = &self.inclusion {
            spec.inclusion = inc.clone();
        }
        spec.load = self.load;
        spec.uniform = self.uniform;
        spec
    }
}

pub fn sweep(args: &SweepArgs, tol: &TolerancePolicy) -> Result<Outcome, CliError> {
    let spec = args.jump_spec(1.0);
    let table = sweep_family(&spec, &args.t_grid, tol)?;
    let status = if table.rows.iter().all(|r| r.checks_passed) {
        ExitStatus::Ok
    } else {
        ExitStatus::CheckFailure
    };
    Ok(Outcome {
        output: sweep_report(&table).render(),
        status,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenKind {
    Random(RandomSpec),
    Jump(JumpSpec),
}

pub fn gen(kind: &GenKind) -> Result<Outcome, CliError> {
    let p = match kind {
        GenKind::Random(spec) => random_problem(spec)?,
        GenKind::Jump(spec) => jump_problem(spec)?,
    };
    Ok(Outcome {
        output: write_problem(&p),
        status: ExitStatus::Ok,
    })
}

/// A contrast value; `inf` selects the exactly degenerate problem.
pub fn parse_contrast(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(CliError::Usage(format!(
            "bad contrast `{s}`: expected a positive number or `inf`"
        ))),
    }
}

pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_contrast).collect()
}

/// `a..b`, half-open cell indices.
pub fn parse_inclusion(s: &str) -> Result<Range<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad inclusion `{s}`: expected `a..b`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    Ok(a..b)
}

pub fn parse_load(s: &str) -> Result<Load, CliError> {
    Load::parse(s).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown load `{s}`: expected uniform, inclusion or sine"
        ))
    })
}
