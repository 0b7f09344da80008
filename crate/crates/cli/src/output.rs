use clap::ValueEnum;
use entropic_core::LogBase;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub log_base: LogBase<f64>,
    pub seed: u64,
    pub format: Format,
    pub quiet: bool,
}

impl Context {
    pub fn base_label(&self) -> String {
        base_label(self.log_base)
    }

    /// Converts nats to the selected base; negative zero prints as `0`.
    pub fn scale(&self, nats: f64) -> f64 {
        self.log_base.from_nats(nats) + 0.0
    }
}

pub fn base_label(base: LogBase<f64>) -> String {
    if base == LogBase::natural() {
        "e".into()
    } else {
        base.value().to_string()
    }
}

pub fn parse_log_base(s: &str) -> std::result::Result<LogBase<f64>, String> {
    if s == "e" {
        return Ok(LogBase::natural());
    }
    let v: f64 = s.parse().map_err(|_| format!("expected `e` or a number, got {s:?}"))?;
    LogBase::new(v).map_err(|e| e.to_string())
}

/// Six significant digits.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    // Exponent after rounding, so 0.99999999 reads as 1.00000.
    let scientific = format!("{x:.5e}");
    let magnitude: i32 = scientific.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-4..6).contains(&magnitude) {
        return scientific;
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn sig_opt(x: Option<f64>) -> String {
    x.map(sig).unwrap_or_else(|| "-".into())
}

/// Column-aligned plain-text table.
pub struct TextTable {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(c))
                    .chain(std::iter::once(&self.headers[c]))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| -> String {
            let mut out = String::new();
            for (c, cell) in cells.iter().enumerate() {
                if c > 0 {
                    out.push_str("  ");
                }
                let pad = widths[c] - cell.chars().count();
                if c == 0 {
                    out.push_str(cell);
                    out.extend(std::iter::repeat_n(' ', pad));
                } else {
                    out.extend(std::iter::repeat_n(' ', pad));
                    out.push_str(cell);
                }
            }
            out.trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

pub fn csv_string<S: AsRef<str>>(headers: &[&str], rows: &[Vec<S>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row.iter().map(AsRef::as_ref))?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// An inequality or identity verdict with the values it was decided from.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs` for inequalities, `tolerance − |lhs − rhs|` for agreements.
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl Check {
    /// `lhs ≥ rhs − tolerance`.
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            tolerance,
            holds: slack >= -tolerance,
        }
    }

    /// `|lhs − rhs| ≤ tolerance`.
    pub fn agrees(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = tolerance - (lhs - rhs).abs();
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            tolerance,
            holds: slack >= 0.0,
        }
    }
}

pub fn checks_table(checks: &[Check]) -> String {
    let mut t = TextTable::new(["check", "lhs", "rhs", "slack", "holds"]);
    for c in checks {
        t.push(vec![
            c.name.clone(),
            sig(c.lhs),
            sig(c.rhs),
            sig(c.slack),
            if c.holds { "yes" } else { "NO" }.into(),
        ]);
    }
    t.render()
}
