use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    DispersionSweep,
    PowerSweep,
    ThroughputSweep,
    BeamPattern,
}

impl SweepKind {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            SweepKind::DispersionSweep => &["scheme", "f_rf_hz", "fiber_km", "fading_db"],
            SweepKind::PowerSweep => &[
                "scheme",
                "f_rf_hz",
                "fiber_km",
                "p_tx_w",
                "cu_w",
                "rap_w",
                "fiber_comp_w",
                "total_w",
            ],
            SweepKind::ThroughputSweep => &[
                "arch",
                "scheme",
                "M",
                "J",
                "drops",
                "p_tx_w",
                "mean_sumrate_bps",
                "ci95_bps",
            ],
            SweepKind::BeamPattern => &["mode", "f_hz", "theta_deg", "af_mag", "af_phase_rad"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Num(f64),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Text(s) => f.write_str(s),
            Cell::Int(v) => write!(f, "{v}"),
            // shortest round-trip representation; "inf", "-inf", "NaN" for specials
            Cell::Num(v) => write!(f, "{v}"),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// Sweep output: a fixed-schema table plus the resolved config it came from.
/// Every row belongs to the run identified by `config_hash`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub kind: SweepKind,
    pub rows: Vec<Vec<Cell>>,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub summary: serde_json::Value,
}

impl ResultTable {
    pub fn new(kind: SweepKind, config_hash: String, config: serde_json::Value) -> Self {
        Self {
            kind,
            rows: Vec::new(),
            config_hash,
            config,
            summary: serde_json::Value::Null,
        }
    }

    pub fn columns(&self) -> &'static [&'static str] {
        self.kind.columns()
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns().len());
        self.rows.push(row);
    }

    fn col_index(&self, name: &str) -> Result<usize> {
        self.columns()
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::validation(format!("no column {name:?} in {:?}", self.kind)))
    }

    /// Numeric column values; text cells come back as NaN.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.col_index(name)?;
        Ok(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    /// Rows whose text column `name` equals `value`.
    pub fn filter<'a>(&'a self, name: &str, value: &'a str) -> Result<impl Iterator<Item = &'a Vec<Cell>> + 'a> {
        let i = self.col_index(name)?;
        Ok(self.rows.iter().filter(move |r| r[i].as_str() == Some(value)))
    }

    pub fn get(&self, row: &[Cell], name: &str) -> Result<f64> {
        let i = self.col_index(name)?;
        row[i]
            .as_f64()
            .ok_or_else(|| Error::validation(format!("column {name:?} is not numeric")))
    }

    /// CSV with a header row, `.` decimals and LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.columns())?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Sidecar JSON: sweep kind, config hash, resolved config and summary.
    pub fn meta_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "columns": self.columns(),
            "rows": self.rows.len(),
            "config_hash": self.config_hash,
            "config": self.config,
            "summary": self.summary,
        })
    }
}
