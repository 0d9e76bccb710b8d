//! Text formats for matrices and descent traces.
//!
//! A matrix file holds optional `key=value` header lines (`mode=` is
//! `multiplicative` or `additive`, default multiplicative; `n=` is the order)
//! followed by comma-separated decimals. With `n=` present the values are the
//! upper triangle in row-major order, spread over any number of lines.
//! Without it every line is one row of the full grid. Blank lines and lines
//! starting with `#` are ignored.
//!
//! A trace file is CSV: a header `iter,indicator,a_1_2,…` (`b_i_j` for the
//! additive scheme), one row per recorded iteration, then a single summary
//! line starting with `#summary`.

use std::fmt::Write as _;

use crate::descent::{DescentResult, Scheme};
use crate::error::Error;
use crate::matrix::{upper_entries, upper_len, AdditivePCMatrix, MultiplicativePCMatrix};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(#[from] Error),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Multiplicative(MultiplicativePCMatrix),
    Additive(AdditivePCMatrix),
}

impl MatrixData {
    pub fn mode(&self) -> MatrixMode {
        match self {
            MatrixData::Multiplicative(_) => MatrixMode::Multiplicative,
            MatrixData::Additive(_) => MatrixMode::Additive,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            MatrixData::Multiplicative(m) => m.order(),
            MatrixData::Additive(b) => b.order(),
        }
    }

    pub fn upper(&self) -> &[f64] {
        match self {
            MatrixData::Multiplicative(m) => m.upper(),
            MatrixData::Additive(b) => b.upper(),
        }
    }

    pub fn to_multiplicative(&self) -> MultiplicativePCMatrix {
        match self {
            MatrixData::Multiplicative(m) => m.clone(),
            MatrixData::Additive(b) => b.to_multiplicative(),
        }
    }
}

/// Parses a matrix file.
pub fn parse_matrix(text: &str) -> Result<MatrixData, FormatError> {
    let mut mode = MatrixMode::Multiplicative;
    let mut order: Option<usize> = None;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len() + 1;
        if let Some((key, value)) = trimmed.split_once('=') {
            if !rows.is_empty() {
                return Err(syntax(line, indent, "header line after matrix data"));
            }
            let value = value.trim();
            match key.trim() {
                "mode" => {
                    mode = match value {
                        "multiplicative" => MatrixMode::Multiplicative,
                        "additive" => MatrixMode::Additive,
                        other => {
                            return Err(syntax(line, indent, format!("unknown mode {other:?}")))
                        }
                    }
                }
                "n" => {
                    order =
                        Some(value.parse().map_err(|_| {
                            syntax(line, indent, format!("invalid order {value:?}"))
                        })?)
                }
                other => return Err(syntax(line, indent, format!("unknown key {other:?}"))),
            }
            continue;
        }
        let mut values = Vec::new();
        let mut offset = 0;
        for field in raw.split(',') {
            let column = offset + field.len() - field.trim_start().len() + 1;
            offset += field.len() + 1;
            let token = field.trim();
            if token.is_empty() {
                // trailing comma
                if offset > raw.len() {
                    continue;
                }
                return Err(syntax(line, column, "empty field"));
            }
            let v: f64 = token
                .parse()
                .map_err(|_| syntax(line, column, format!("not a number: {token:?}")))?;
            values.push(v);
        }
        rows.push((line, values));
    }

    let data = match order {
        Some(n) => {
            let upper: Vec<f64> = rows.into_iter().flat_map(|(_, v)| v).collect();
            if upper.len() != upper_len(n) {
                return Err(Error::DimensionMismatch {
                    expected: upper_len(n),
                    got: upper.len(),
                }
                .into());
            }
            match mode {
                MatrixMode::Multiplicative => {
                    MatrixData::Multiplicative(MultiplicativePCMatrix::from_upper(n, upper)?)
                }
                MatrixMode::Additive => {
                    MatrixData::Additive(AdditivePCMatrix::from_upper(n, upper)?)
                }
            }
        }
        None => {
            let n = rows.len();
            if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
                return Err(syntax(
                    *line,
                    1,
                    format!(
                        "row has {} values, expected {n} for a square grid",
                        row.len()
                    ),
                ));
            }
            let grid: Vec<Vec<f64>> = rows.into_iter().map(|(_, r)| r).collect();
            match mode {
                MatrixMode::Multiplicative => {
                    MatrixData::Multiplicative(MultiplicativePCMatrix::from_grid(&grid)?)
                }
                MatrixMode::Additive => MatrixData::Additive(AdditivePCMatrix::from_grid(&grid)?),
            }
        }
    };
    Ok(data)
}

fn mode_name(mode: MatrixMode) -> &'static str {
    match mode {
        MatrixMode::Multiplicative => "multiplicative",
        MatrixMode::Additive => "additive",
    }
}

/// Upper-triangle form; re-reading it gives back the exact same bits.
pub fn write_matrix_upper(data: &MatrixData) -> String {
    let n = data.order();
    let mut out = format!("mode={}\nn={n}\n", mode_name(data.mode()));
    let mut it = data.upper().iter();
    for i in 1..n {
        let row: Vec<String> = it.by_ref().take(n - i).map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(", "));
        out.push('\n');
    }
    out
}

/// Full-grid form.
pub fn write_matrix_grid(data: &MatrixData) -> String {
    let grid = match data {
        MatrixData::Multiplicative(m) => m.to_grid(),
        MatrixData::Additive(b) => b.to_grid(),
    };
    let mut out = format!("mode={}\n", mode_name(data.mode()));
    for row in grid {
        let row: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(", "));
        out.push('\n');
    }
    out
}

/// Column labels `a_i_j` / `b_i_j` for the upper triangle.
pub fn entry_columns(n: usize, scheme: Scheme) -> Vec<String> {
    let prefix = match scheme {
        Scheme::Multiplicative => "a",
        Scheme::Additive => "b",
    };
    upper_entries(n)
        .map(|e| format!("{prefix}_{}_{}", e.0, e.1))
        .collect()
}

pub fn write_trace(result: &DescentResult) -> String {
    let n = result.best_matrix.order();
    let columns = entry_columns(n, result.scheme);
    let mut out = String::new();
    writeln!(out, "iter,indicator,{}", columns.join(",")).unwrap();
    for rec in &result.trace.records {
        write!(out, "{},{:?}", rec.iter, rec.indicator).unwrap();
        for v in &rec.upper {
            write!(out, ",{v:?}").unwrap();
        }
        out.push('\n');
    }
    write!(
        out,
        "#summary,stop_reason={},best_iter={},best_indicator={:?},clamps={}",
        result.stop_reason,
        result.best_iter,
        result.best_indicator,
        result.trace.clamps.len()
    )
    .unwrap();
    for (c, v) in columns.iter().zip(result.best_upper()) {
        write!(out, ",{c}={v:?}").unwrap();
    }
    out.push('\n');
    out
}

/// Parsed trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub columns: Vec<String>,
    pub rows: Vec<(usize, f64, Vec<f64>)>,
    pub summary: Vec<(String, String)>,
}

impl TraceTable {
    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn parse_trace(text: &str) -> Result<TraceTable, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| syntax(1, 1, "empty trace"))?;
    let mut fields = header.split(',');
    if fields.next() != Some("iter") || fields.next() != Some("indicator") {
        return Err(syntax(1, 1, "trace header must start with iter,indicator"));
    }
    let columns: Vec<String> = fields.map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix("#summary") {
            for kv in rest.split(',').filter(|s| !s.is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| syntax(lineno, 1, format!("bad summary field {kv:?}")))?;
                summary.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != columns.len() + 2 {
            return Err(syntax(lineno, 1, "wrong number of fields"));
        }
        let num = |s: &str| -> Result<f64, FormatError> {
            s.parse()
                .map_err(|_| syntax(lineno, 1, format!("not a number: {s:?}")))
        };
        let iter = parts[0]
            .parse()
            .map_err(|_| syntax(lineno, 1, "bad iteration index"))?;
        let values = parts[2..]
            .iter()
            .map(|s| num(s))
            .collect::<Result<_, _>>()?;
        rows.push((iter, num(parts[1])?, values));
    }
    Ok(TraceTable {
        columns,
        rows,
        summary,
    })
}
