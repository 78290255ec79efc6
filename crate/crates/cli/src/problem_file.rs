//! Plain-text problem files.
//!
//! ```text
//! %A
//! 3 3
//! 1 0 0
//! 0 1 1
//! 0 1 1
//! %B
//! 1 3
//! 1 0 0
//! %g
//! 3 1
//! 0
//! 1
//! 1
//! %f
//! 3 1
//! 2
//! 0
//! 0
//! ```
//!
//! Sections may come in any order. Blank lines and lines starting with `#`
//! are ignored everywhere.

use std::fmt::Write as _;

use saddlegap_core::{DenseMatrix, SaddleProblem, TolerancePolicy};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}{}: {message}", section.as_ref().map(|s| format!(" (section %{s})")).unwrap_or_default())]
pub struct ParseError {
    /// 1-based line number; 0 for whole-file problems such as a missing section.
    pub line: usize,
    pub section: Option<String>,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, section: Option<&str>, message: impl Into<String>) -> Self {
        ParseError {
            line,
            section: section.map(str::to_owned),
            message: message.into(),
        }
    }
}

const SECTIONS: [&str; 4] = ["A", "B", "g", "f"];

/// The four raw sections of a problem file, before any consistency checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSections {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub g: Vec<f64>,
    pub f: Vec<f64>,
}

impl ProblemSections {
    pub fn into_problem(self, tol: &TolerancePolicy) -> saddlegap_core::Result<SaddleProblem> {
        SaddleProblem::new(self.a, self.b, self.g, self.f, tol)
    }
}

/// Significant lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, section: Option<&str>, s: &str) -> Result<Vec<f64>, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            let v: f64 = tok
                .parse()
                .map_err(|_| ParseError::new(line, section, format!("`{tok}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ParseError::new(
                    line,
                    section,
                    format!("`{tok}` is not finite"),
                ))
            }
        })
        .collect()
}

/// Parses one matrix body: a `rows cols` header followed by `rows` lines.
fn parse_matrix<'a>(
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
    section: Option<&str>,
    header_line: usize,
) -> Result<DenseMatrix, ParseError> {
    let (line, header) = match lines.next() {
        Some((l, h)) if !h.starts_with('%') => (l, h),
        _ => {
            return Err(ParseError::new(
                header_line,
                section,
                "missing `rows cols` header",
            ))
        }
    };
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| ParseError::new(line, section, format!("bad dimension `{t}`")))
    };
    if dims.len() != 2 {
        return Err(ParseError::new(line, section, "header must be `rows cols`"));
    }
    let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let mut data = Vec::with_capacity(rows * cols);
    let mut last = line;
    for r in 0..rows {
        let (l, body) = match lines.peek() {
            Some(&(l, body)) if !body.starts_with('%') => (l, body),
            _ => {
                return Err(ParseError::new(
                    last,
                    section,
                    format!("expected {rows} rows, found {r}"),
                ))
            }
        };
        lines.next();
        let row = parse_numbers(l, section, body)?;
        if row.len() != cols {
            return Err(ParseError::new(
                l,
                section,
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        data.extend(row);
        last = l;
    }
    if let Some(&(l, body)) = lines.peek() {
        if !body.starts_with('%') {
            return Err(ParseError::new(
                l,
                section,
                format!("more than {rows} rows"),
            ));
        }
    }
    DenseMatrix::from_row_major(rows, cols, data)
        .map_err(|e| ParseError::new(line, section, e.to_string()))
}

fn into_vector(m: DenseMatrix, section: &str, line: usize) -> Result<Vec<f64>, ParseError> {
    if m.cols() != 1 {
        return Err(ParseError::new(
            line,
            Some(section),
            format!("vector section must be `rows 1`, got {} columns", m.cols()),
        ));
    }
    Ok(m.as_slice().to_vec())
}

/// Parses the four sections. Dimensions are checked against each other so
/// that mismatches are reported with the offending section.
pub fn parse_sections(text: &str) -> Result<ProblemSections, ParseError> {
    let mut found: [Option<(usize, DenseMatrix)>; 4] = Default::default();
    let mut lines = content_lines(text).peekable();
    while let Some((line, l)) = lines.next() {
        let name = l
            .strip_prefix('%')
            .ok_or_else(|| {
                ParseError::new(
                    line,
                    None,
                    format!("expected a section header, found `{l}`"),
                )
            })?
            .trim();
        let idx = SECTIONS
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| ParseError::new(line, None, format!("unknown section `%{name}`")))?;
        if found[idx].is_some() {
            return Err(ParseError::new(line, Some(name), "duplicate section"));
        }
        found[idx] = Some((line, parse_matrix(&mut lines, Some(name), line)?));
    }
    let mut take = |i: usize| {
        found[i]
            .take()
            .ok_or_else(|| ParseError::new(0, Some(SECTIONS[i]), "section missing"))
    };
    let (la, a) = take(0)?;
    let (lb, b) = take(1)?;
    let (lg, g) = take(2)?;
    let (lf, f) = take(3)?;
    let g = into_vector(g, "g", lg)?;
    let f = into_vector(f, "f", lf)?;

    let n = a.rows();
    if a.cols() != n {
        return Err(ParseError::new(
            la,
            Some("A"),
            format!("A must be square, got {n}×{}", a.cols()),
        ));
    }
    if b.cols() != n {
        return Err(ParseError::new(
            lb,
            Some("B"),
            format!("B needs {n} columns, got {}", b.cols()),
        ));
    }
    if g.len() != n {
        return Err(ParseError::new(
            lg,
            Some("g"),
            format!("g needs {n} rows, got {}", g.len()),
        ));
    }
    if f.len() != n {
        return Err(ParseError::new(
            lf,
            Some("f"),
            format!("f needs {n} rows, got {}", f.len()),
        ));
    }
    Ok(ProblemSections { a, b, g, f })
}

/// A basis file holds a single matrix whose columns span a subspace. An
/// optional `%name` header line is allowed.
pub fn parse_basis(text: &str) -> Result<DenseMatrix, ParseError> {
    let mut lines = content_lines(text).peekable();
    let mut section = None;
    let mut header_line = 0;
    if let Some(&(l, s)) = lines.peek() {
        if let Some(name) = s.strip_prefix('%') {
            section = Some(name.trim().to_owned());
            header_line = l;
            lines.next();
        }
    }
    let m = parse_matrix(&mut lines, section.as_deref(), header_line)?;
    if let Some((l, _)) = lines.next() {
        return Err(ParseError::new(
            l,
            section.as_deref(),
            "basis files hold one matrix",
        ));
    }
    Ok(m)
}

/// Formats a double with 17 significant digits, enough to round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_matrix(out: &mut String, m: &DenseMatrix) {
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| fmt_f64(x)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn write_problem(p: &SaddleProblem) -> String {
    let mut out = String::new();
    for (name, m) in [
        ("A", p.a().clone()),
        ("B", p.b().clone()),
        ("g", DenseMatrix::column_vector(p.g())),
        ("f", DenseMatrix::column_vector(p.f())),
    ] {
        let _ = writeln!(out, "%{name}");
        write_matrix(&mut out, &m);
    }
    out
}

pub fn write_basis(m: &DenseMatrix) -> String {
    let mut out = String::new();
    write_matrix(&mut out, m);
    out
}
