//! Text formats for trajectories and reports.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which is
//! enough for every `f64` to re-parse to the same bits.
//!
//! CSV: a header line of column names, then one line per row.
//! Key-value: `key = value` lines; table rows appear as `sample = v1,v2,...`
//! after a `columns = name1,name2,...` line.

use std::fmt::Write as _;

use confract::{Trajectory, TubeReport};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Named columns of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self {
            columns: vec!["t".into(), "x".into()],
            rows: traj.iter().map(|(t, x)| vec![t, x]).collect(),
        }
    }

    /// `t` followed by one column per trajectory; the grids must agree.
    pub fn side_by_side(names: &[&str], trajs: &[&Trajectory]) -> Self {
        let mut columns = vec!["t".to_string()];
        columns.extend(names.iter().map(|n| n.to_string()));
        let grid = trajs[0].grid();
        let rows = (0..grid.len())
            .map(|i| {
                let mut row = vec![grid[i]];
                row.extend(trajs.iter().map(|tr| tr.values()[i]));
                row
            })
            .collect();
        Self { columns, rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    fn row_text(row: &[f64]) -> String {
        row.iter().map(|&v| real(v)).collect::<Vec<_>>().join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&Self::row_text(row));
            out.push('\n');
        }
        out
    }

    fn parse_row(text: &str, width: usize, line: usize) -> Result<Vec<f64>, FormatError> {
        let row = text
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| malformed(line, format!("not a number: `{field}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != width {
            return Err(malformed(
                line,
                format!("expected {width} fields, found {}", row.len()),
            ));
        }
        Ok(row)
    }

    pub fn from_csv(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let rows = lines
            .map(|(i, l)| Self::parse_row(l, columns.len(), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { columns, rows })
    }
}

/// An ordered key-value report, optionally followed by a table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, String)>,
    pub table: Option<Table>,
}

impl Record {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn push_real(&mut self, key: &str, value: f64) {
        self.push(key, real(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.fields
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k} = {v}");
        }
        if let Some(table) = &self.table {
            let _ = writeln!(out, "columns = {}", table.columns.join(","));
            for row in &table.rows {
                let _ = writeln!(out, "sample = {}", Table::row_text(row));
            }
        }
        out
    }

    /// Scalar fields as a one-row CSV (header, then values).
    pub fn to_csv_row(&self) -> String {
        let keys: Vec<&str> = self.fields.iter().map(|(k, _)| k.as_str()).collect();
        let values: Vec<&str> = self.fields.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", keys.join(","), values.join(","))
    }

    pub fn from_kv(text: &str) -> Result<Self, FormatError> {
        let mut record = Record::default();
        let mut table: Option<Table> = None;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| malformed(i + 1, "expected `key = value`"))?;
            match (k.trim(), &mut table) {
                ("columns", None) => {
                    table = Some(Table {
                        columns: v.split(',').map(|c| c.trim().to_string()).collect(),
                        rows: Vec::new(),
                    })
                }
                ("columns", Some(_)) => return Err(malformed(i + 1, "duplicate `columns`")),
                ("sample", None) => return Err(malformed(i + 1, "`sample` before `columns`")),
                ("sample", Some(t)) => {
                    let row = Table::parse_row(v, t.columns.len(), i + 1)?;
                    t.rows.push(row);
                }
                (key, _) => record.push(key, v.trim()),
            }
        }
        record.table = table;
        Ok(record)
    }
}

pub fn tube_record(report: &TubeReport) -> Record {
    let mut r = Record::default();
    r.push("verification_kind", report.verification_kind());
    r.push("samples_n", report.samples_n);
    r.push_real("tol", report.tol);
    r.push("cond_i_ok", report.cond_i_ok);
    r.push("cond_ii_ok", report.cond_ii_ok);
    r.push("cond_iii_ok", report.cond_iii_ok);
    r.push("all_ok", report.all_ok());
    r.push_real("worst_margin_i", report.worst_margin_i);
    r.push_real("worst_margin_ii", report.worst_margin_ii);
    r.push_real("worst_margin_iii", report.worst_margin_iii);
    r.push("zero_radius_samples", report.zero_radius_samples);
    r
}

/// Violation witnesses as `condition,t,y,margin`.
pub fn witness_lines(report: &TubeReport) -> Vec<String> {
    report
        .witnesses
        .iter()
        .map(|w| format!("{},{},{},{}", w.condition, real(w.t), real(w.y), real(w.margin)))
        .collect()
}
