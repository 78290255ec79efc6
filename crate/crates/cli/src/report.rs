//! `key = value` report documents.
//!
//! Numbers are written with 17 significant digits, vectors as
//! space-separated numbers, and missing values as `none`. Lines starting
//! with `#` are commentary and carry no data.

use std::fmt;

use saddlegap_core::{
    Analysis, CheckRecord, Constant, GapExpression, GapReport, SaddleProblem, SolveReport,
    SplitSystem, SweepRow, SweepTable,
};

use crate::problem_file::fmt_f64;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq)]
enum Line {
    Comment(String),
    Field(String, String),
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "none".into())
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.lines.push(Line::Comment(text.into()));
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.lines.push(Line::Field(key.into(), value.to_string()));
    }

    pub fn number(&mut self, key: impl Into<String>, x: f64) {
        self.field(key, fmt_f64(x));
    }

    pub fn vector(&mut self, key: impl Into<String>, v: &[f64]) {
        self.field(key, fmt_vec(v));
    }

    pub fn constant(&mut self, key: impl Into<String>, c: Constant) {
        self.field(key, c);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Field(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter_map(|l| match l {
            Line::Field(k, _) => Some(k.as_str()),
            Line::Comment(_) => None,
        })
    }

    /// Parses a rendered report back; comments are kept.
    pub fn parse(text: &str) -> Option<Report> {
        let mut r = Report::new();
        for line in text.lines() {
            if let Some(c) = line.strip_prefix("# ") {
                r.comment(c);
            } else if !line.trim().is_empty() {
                let (k, v) = line
                    .split_once(" = ")
                    .or_else(|| line.strip_suffix(" =").map(|k| (k, "")))?;
                r.lines.push(Line::Field(k.to_owned(), v.to_owned()));
            }
        }
        Some(r)
    }

    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for l in other.lines {
            self.lines.push(match l {
                Line::Field(k, v) => Line::Field(format!("{prefix}{k}"), v),
                c => c,
            });
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            match l {
                Line::Comment(c) => writeln!(f, "# {c}")?,
                Line::Field(k, v) if v.is_empty() => writeln!(f, "{k} =")?,
                Line::Field(k, v) => writeln!(f, "{k} = {v}")?,
            }
        }
        Ok(())
    }
}

pub fn problem_block(r: &mut Report, p: &SaddleProblem) {
    r.field("problem.n", p.n());
    r.field("problem.m", p.m());
}

pub fn solve_block(r: &mut Report, split: &SplitSystem, s: &SolveReport) {
    r.field("split.dimN", split.dim_null());
    r.field("split.kernel_overlap_dim", s.kernel_overlap_dim);
    r.vector("solve.sigma", &s.sigma);
    match &s.u {
        Some(u) => r.vector("solve.u", u),
        None => r.field("solve.u", "none"),
    }
    r.field("solve.admissible", s.admissible);
    r.number("solve.residuals.admissibility", s.admissibility_residual);
    r.number("solve.residuals.first_eq", s.residual_first_eq);
    r.number("solve.residuals.constraint", s.residual_constraint);
    r.field("solve.residuals.u", fmt_opt(s.residual_u));
}

fn check_block(r: &mut Report, c: &CheckRecord) {
    r.field(format!("checks.{}.status", c.name), c.status.label());
    r.field(format!("checks.{}.residual", c.name), fmt_opt(c.residual));
}

pub fn gap_block(r: &mut Report, prefix: &str, g: &GapReport) {
    if g.vacuous {
        r.comment("P⊥D = {0} (D ⊆ P): kappa = 1 by convention");
    }
    r.number(format!("{prefix}kappa"), g.kappa);
    r.field(format!("{prefix}vacuous"), g.vacuous);
    for e in GapExpression::ALL {
        r.number(format!("{prefix}{}", e.label()), g.value(e));
    }
    r.number(format!("{prefix}max_spread"), g.max_spread);
}

pub fn analysis_report(p: &SaddleProblem, an: &Analysis) -> Report {
    let mut r = Report::new();
    problem_block(&mut r, p);
    solve_block(&mut r, &an.split, &an.solution);
    let w = &an.report;
    r.constant("constants.c_b", w.c_b);
    r.constant("constants.c_a", w.c_a);
    r.constant("constants.rho", w.rho);
    r.constant("constants.rho_via_K", w.rho_via_k);
    r.constant("constants.rho_D", w.rho_d);
    r.number("constants.kappa", w.kappa);
    gap_block(&mut r, "gap.", &w.gap);
    for c in &w.checks {
        check_block(&mut r, c);
    }
    r
}

pub fn solve_report(p: &SaddleProblem, split: &SplitSystem, s: &SolveReport) -> Report {
    let mut r = Report::new();
    problem_block(&mut r, p);
    solve_block(&mut r, split, s);
    r
}

fn sweep_row(row: &SweepRow) -> Report {
    let mut r = Report::new();
    r.number("t", row.t);
    r.vector("solve.sigma", &row.sigma);
    r.number("solve.sigma_norm", row.sigma_norm);
    r.field("split.kernel_overlap_dim", row.kernel_overlap_dim);
    r.number("solve.residuals.first_eq", row.residual_first_eq);
    r.number("solve.residuals.constraint", row.residual_constraint);
    r.constant("constants.c_b", row.c_b);
    r.constant("constants.c_a", row.c_a);
    r.constant("constants.rho", row.rho);
    r.constant("constants.rho_D", row.rho_d);
    r.number("constants.kappa", row.kappa);
    r.field("checks.all_passed", row.checks_passed);
    r
}

pub fn sweep_report(table: &SweepTable) -> Report {
    let mut r = Report::new();
    let distances = table.distances_to_limit();
    for (i, row) in table.rows.iter().enumerate() {
        let mut block = sweep_row(row);
        if let Some(d) = &distances {
            block.number("solve.distance_to_limit", d[i]);
        }
        r.extend_prefixed(&format!("row.{i}."), block);
    }
    r.field("summary.rows", table.rows.len());
    r.field(
        "summary.max_distance_to_limit",
        fmt_opt(table.max_distance_to_limit),
    );
    r.field("summary.max_rho", fmt_opt(table.max_rho));
    r
}

/// Parses a space-separated vector value.
pub fn parse_vector(value: &str) -> Option<Vec<f64>> {
    value.split_whitespace().map(|t| t.parse().ok()).collect()
}
