//! Plain-text tables.
//!
//! Every table is comma-separated with one header row. Lines starting with
//! `#` carry metadata and are skipped on reading. Distributions use the
//! columns `state,probability`; matrices use `state,<label>,…` with one row
//! per state.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::markov::Distribution;

/// Formats a float so that it parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() { format!("{v:?}") } else { v.to_string() }
}

/// Builder for a `#`-annotated CSV table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    metadata: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { metadata: Vec::new(), header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.metadata.push(format!("{key}: {value}"));
        self
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for m in &self.metadata {
            let _ = writeln!(s, "# {m}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

pub fn distribution_table(labels: &[String], p: &Distribution) -> Result<Table> {
    if labels.len() != p.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: labels.len() });
    }
    let mut t = Table::new(["state", "probability"]);
    for (l, v) in labels.iter().zip(p.as_slice()) {
        t.push([l.clone(), fmt_f64(*v)]);
    }
    Ok(t)
}

pub fn matrix_table(labels: &[String], m: &DMatrix<f64>) -> Result<Table> {
    if labels.len() != m.nrows() || m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: labels.len() });
    }
    let mut t = Table::new(std::iter::once("state".to_string()).chain(labels.iter().cloned()));
    for (i, l) in labels.iter().enumerate() {
        t.push(std::iter::once(l.clone()).chain(m.row(i).iter().map(|v| fmt_f64(*v))));
    }
    Ok(t)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

pub fn read_distribution(text: &str) -> Result<(Vec<String>, Distribution)> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some("state,probability") => {}
        other => return Err(Error::Parse(format!("expected header `state,probability`, found {other:?}"))),
    }
    let mut labels = Vec::new();
    let mut p = Vec::new();
    for line in lines {
        let (l, v) = line.split_once(',').ok_or_else(|| Error::Parse(format!("bad row `{line}`")))?;
        labels.push(l.to_string());
        p.push(parse_f64(v)?);
    }
    Ok((labels, Distribution::new(p)?))
}

pub fn read_matrix(text: &str) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut lines = data_lines(text);
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix table".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"state") {
        return Err(Error::Parse("matrix header must start with `state`".into()));
    }
    let labels: Vec<String> = cols[1..].iter().map(|s| s.to_string()).collect();
    let n = labels.len();
    let mut m = DMatrix::zeros(n, n);
    let mut count = 0;
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if i >= n || cells.len() != n + 1 || cells[0] != labels[i] {
            return Err(Error::Parse(format!("matrix row {i} does not match the header")));
        }
        for j in 0..n {
            m[(i, j)] = parse_f64(cells[j + 1])?;
        }
        count += 1;
    }
    if count != n {
        return Err(Error::Parse(format!("expected {n} matrix rows, found {count}")));
    }
    Ok((labels, m))
}
