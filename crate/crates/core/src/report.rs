//! Result rows and their CSV / JSON Lines encodings.
//!
//! Numbers are written in scientific notation with 12 significant digits,
//! infinities as `inf`, so identical runs give identical bytes. A NaN is a
//! hard error, never an output value.

use std::io::Write;

use serde_json::{Map, Value};

use crate::bft::Verdict;
use crate::config::{Format, Scenario};
use crate::error::{Error, Result};

pub const SCHEMA_LINE: &str = "#schema=1";

pub const COLUMNS: [&str; 29] = [
    "scenario",
    "m",
    "omega",
    "gamma",
    "hbar",
    "d_abs",
    "theta",
    "omega1",
    "omega2",
    "lambda",
    "t",
    "delta_qd",
    "delta_qd_paper",
    "delta_cc",
    "delta_cc_paper",
    "gamma_c",
    "gamma_delta",
    "gamma_mu_im",
    "purity",
    "energy",
    "energy_paper",
    "uncertainty",
    "decohered",
    "correlated",
    "classical",
    "decohered_paper",
    "correlated_paper",
    "classical_paper",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RowParams {
    pub m: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub hbar: Option<f64>,
    pub d_abs: Option<f64>,
    pub theta: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: Scenario,
    pub params: RowParams,
    pub t: f64,
    pub delta_qd: f64,
    pub delta_qd_paper: f64,
    pub delta_cc: f64,
    pub delta_cc_paper: f64,
    pub gamma_c: f64,
    pub gamma_delta: f64,
    pub gamma_mu_im: f64,
    pub purity: f64,
    pub energy: Option<f64>,
    pub energy_paper: Option<f64>,
    pub uncertainty: Option<f64>,
    pub verdict: Verdict,
    pub paper_verdict: Verdict,
    /// `ok`, or the name of the row-level self check that failed.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Num(f64),
    Bool(bool),
    Text(String),
}

impl ResultRow {
    /// Cells in [`COLUMNS`] order.
    pub fn cells(&self) -> Vec<Cell> {
        let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
        let p = &self.params;
        vec![
            Cell::Text(self.scenario.name().to_string()),
            opt(p.m),
            opt(p.omega),
            opt(p.gamma),
            opt(p.hbar),
            opt(p.d_abs),
            opt(p.theta),
            opt(p.omega1),
            opt(p.omega2),
            opt(p.lambda),
            Cell::Num(self.t),
            Cell::Num(self.delta_qd),
            Cell::Num(self.delta_qd_paper),
            Cell::Num(self.delta_cc),
            Cell::Num(self.delta_cc_paper),
            Cell::Num(self.gamma_c),
            Cell::Num(self.gamma_delta),
            Cell::Num(self.gamma_mu_im),
            Cell::Num(self.purity),
            opt(self.energy),
            opt(self.energy_paper),
            opt(self.uncertainty),
            Cell::Bool(self.verdict.decohered),
            Cell::Bool(self.verdict.correlated),
            Cell::Bool(self.verdict.classical),
            Cell::Bool(self.paper_verdict.decohered),
            Cell::Bool(self.paper_verdict.correlated),
            Cell::Bool(self.paper_verdict.classical),
            Cell::Text(self.status.clone()),
        ]
    }
}

pub fn format_number(x: f64) -> Option<String> {
    if x.is_nan() {
        None
    } else if x == f64::INFINITY {
        Some("inf".into())
    } else if x == f64::NEG_INFINITY {
        Some("-inf".into())
    } else {
        Some(format!("{x:.11e}"))
    }
}

fn nan_error(row: usize, column: &str) -> Error {
    Error::NotANumber(format!("column '{column}' of row {row}"))
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut w: W) -> Result<()> {
    writeln!(w, "{SCHEMA_LINE}")?;
    writeln!(w, "{}", COLUMNS.join(","))?;
    for (i, row) in rows.iter().enumerate() {
        let mut fields = Vec::with_capacity(COLUMNS.len());
        for (cell, col) in row.cells().into_iter().zip(COLUMNS) {
            fields.push(match cell {
                Cell::Empty => String::new(),
                Cell::Num(x) => format_number(x).ok_or_else(|| nan_error(i, col))?,
                Cell::Bool(b) => b.to_string(),
                Cell::Text(s) => s,
            });
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// One JSON object per line. Numbers use the same 12-digit rendering as the
/// CSV so the two encodings carry identical values.
pub fn write_json<W: Write>(rows: &[ResultRow], mut w: W) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        let mut obj = Map::new();
        for (cell, col) in row.cells().into_iter().zip(COLUMNS) {
            let v = match cell {
                Cell::Empty => Value::Null,
                Cell::Num(x) if x.is_infinite() => Value::String(format_number(x).unwrap_or_default()),
                Cell::Num(x) => {
                    let rounded = format_number(x).and_then(|s| s.parse().ok());
                    Value::Number(rounded.and_then(serde_json::Number::from_f64).ok_or_else(|| nan_error(i, col))?)
                }
                Cell::Bool(b) => Value::Bool(b),
                Cell::Text(s) => Value::String(s),
            };
            obj.insert(col.to_string(), v);
        }
        serde_json::to_writer(&mut w, &Value::Object(obj)).map_err(std::io::Error::from)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(rows, w),
        Format::Json => write_json(rows, w),
    }
}
