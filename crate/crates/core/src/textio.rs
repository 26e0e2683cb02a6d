//! Plain-text matrix and vector files.
//!
//! ```text
//! # comment
//! dim 3
//! R 1.40          (optional keyword headers, CI files only)
//! 0.5 0.1 0.2
//! 0.1 0.6 0.1
//! 0.2 0.1 0.7
//! ```
//!
//! A matrix file holds `dim` rows of `dim` whitespace-separated reals, one row
//! per line. A vector file holds `dim` reals in any line layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixText {
    pub matrix: DMatrix<f64>,
    /// Keyword headers other than `dim`, e.g. `R` and `ehf`.
    pub headers: BTreeMap<String, f64>,
}

fn parse_err(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_real(token: &str, source: &str, line: usize) -> Result<f64> {
    let value: f64 = token
        .parse()
        .map_err(|_| parse_err(source, line, format!("'{token}' is not a number")))?;
    if !value.is_finite() {
        return Err(parse_err(source, line, format!("'{token}' is not finite")));
    }
    Ok(value)
}

/// Content lines with their 1-based line numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads the `dim` line and any keyword headers, returning the remaining lines.
fn read_header<'a>(
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
    source: &str,
    allowed: &[&str],
) -> Result<(usize, BTreeMap<String, f64>)> {
    let (line_no, first) = lines
        .next()
        .ok_or_else(|| parse_err(source, 0, "empty file, expected 'dim <n>'"))?;
    let mut tokens = first.split_whitespace();
    if tokens.next() != Some("dim") {
        return Err(parse_err(
            source,
            line_no,
            "expected 'dim <n>' as the first line",
        ));
    }
    let dim: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err(source, line_no, "dim must be a positive integer"))?;
    if tokens.next().is_some() {
        return Err(parse_err(source, line_no, "trailing tokens after dim"));
    }

    let mut headers = BTreeMap::new();
    while let Some(&(line_no, line)) = lines.peek() {
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap_or_default();
        if !key.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        if !allowed.contains(&key) {
            return Err(parse_err(
                source,
                line_no,
                format!("unknown header '{key}'"),
            ));
        }
        let value = tokens
            .next()
            .ok_or_else(|| parse_err(source, line_no, format!("header '{key}' needs a value")))?;
        let value = parse_real(value, source, line_no)?;
        if tokens.next().is_some() {
            return Err(parse_err(
                source,
                line_no,
                format!("trailing tokens after '{key}'"),
            ));
        }
        if headers.insert(key.to_string(), value).is_some() {
            return Err(parse_err(
                source,
                line_no,
                format!("duplicate header '{key}'"),
            ));
        }
        lines.next();
    }
    Ok((dim, headers))
}

pub fn parse_matrix(text: &str, source: &str, allowed_headers: &[&str]) -> Result<MatrixText> {
    let mut lines = content_lines(text).peekable();
    let (dim, headers) = read_header(&mut lines, source, allowed_headers)?;
    let mut data = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    let mut last_line = 0;
    for (line_no, line) in lines {
        last_line = line_no;
        if rows == dim {
            return Err(parse_err(
                source,
                line_no,
                format!("more than {dim} matrix rows"),
            ));
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|tok| parse_real(tok, source, line_no))
            .collect::<Result<_>>()?;
        if row.len() != dim {
            return Err(parse_err(
                source,
                line_no,
                format!("row has {} entries, expected {dim}", row.len()),
            ));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != dim {
        return Err(parse_err(
            source,
            last_line,
            format!("found {rows} matrix rows, expected {dim}"),
        ));
    }
    Ok(MatrixText {
        matrix: DMatrix::from_row_slice(dim, dim, &data),
        headers,
    })
}

pub fn parse_vector(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut lines = content_lines(text).peekable();
    let (dim, _) = read_header(&mut lines, source, &[])?;
    let mut values = Vec::with_capacity(dim);
    let mut last_line = 0;
    for (line_no, line) in lines {
        last_line = line_no;
        for tok in line.split_whitespace() {
            if values.len() == dim {
                return Err(parse_err(
                    source,
                    line_no,
                    format!("more than {dim} entries"),
                ));
            }
            values.push(parse_real(tok, source, line_no)?);
        }
    }
    if values.len() != dim {
        return Err(parse_err(
            source,
            last_line,
            format!("found {} entries, expected {dim}", values.len()),
        ));
    }
    Ok(values)
}

pub fn read_matrix_file(path: &Path, allowed_headers: &[&str]) -> Result<MatrixText> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, &path.display().to_string(), allowed_headers)
}

pub fn read_vector_file(path: &Path) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_vector(&text, &path.display().to_string())
}

/// Writes a matrix in the file format, headers first.
pub fn format_matrix(matrix: &DMatrix<f64>, headers: &[(&str, f64)]) -> String {
    let mut out = format!("dim {}\n", matrix.nrows());
    for (k, v) in headers {
        let _ = writeln!(out, "{k} {v}");
    }
    for row in matrix.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_vector(values: &[f64]) -> String {
    let mut out = format!("dim {}\n", values.len());
    for v in values {
        let _ = writeln!(out, "{v:e}");
    }
    out
}
