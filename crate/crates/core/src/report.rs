//! Report records and plot data.
//!
//! JSON reports carry `"schema": 1`. Reals are written with a fixed
//! scientific format and rationals as `"p/q"`, so identical inputs produce
//! byte-identical files.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result, TrajectorySample};

pub const SCHEMA: u32 = 1;

/// Fixed real format of every report.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.12e}")
}

/// One residual or exactness check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    /// The statement being checked.
    pub claim: String,
    /// Where the check was evaluated.
    pub point: Vec<String>,
    pub value: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckRecord {
    /// A residual check passing when `value < tolerance`.
    pub fn residual(check: &str, claim: &str, point: &[f64], value: f64, tolerance: f64) -> Self {
        CheckRecord {
            check: check.into(),
            claim: claim.into(),
            point: point.iter().map(|x| fmt_real(*x)).collect(),
            value: fmt_real(value),
            tolerance: fmt_real(tolerance),
            pass: value < tolerance,
        }
    }

    /// An exact comparison.
    pub fn exact(check: &str, claim: &str, point: Vec<String>, value: String, expected: String) -> Self {
        let pass = value == expected;
        CheckRecord { check: check.into(), claim: claim.into(), point, value, tolerance: format!("== {expected}"), pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, checks: Vec<CheckRecord>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report { schema: SCHEMA, command: command.into(), pass, checks, data }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Emitted when a command cannot run to completion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureReport {
    pub schema: u32,
    pub command: String,
    pub pass: bool,
    pub exit_code: i32,
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl FailureReport {
    pub fn from_error(command: &str, err: &Error) -> Self {
        let (kind, details) = match err {
            Error::Domain(_) => ("domain", vec![]),
            Error::Singular(_) => ("singular", vec![]),
            Error::Escape { partial, .. } => ("escape", vec![format!("{} samples before escape", partial.len())]),
            Error::Degenerate(_) => ("degenerate", vec![]),
            Error::Precondition(_) => ("precondition", vec![]),
            Error::Classification { survivors, .. } => ("classification", survivors.clone()),
            Error::Budget(_) => ("budget", vec![]),
            Error::Config(_) => ("config", vec![]),
            Error::Io(_) => ("io", vec![]),
        };
        FailureReport {
            schema: SCHEMA,
            command: command.into(),
            pass: false,
            exit_code: exit_code(err),
            kind: kind.into(),
            message: err.to_string(),
            details,
        }
    }
}

/// Exit code of a failed command: 1 for a failed check or classification,
/// 2 for a malformed configuration or command line, 3 for a violated
/// precondition or an input outside the domain, 4 for a numerical failure
/// and 5 for an I/O failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Classification { .. } => 1,
        Error::Config(_) => 2,
        Error::Precondition(_) | Error::Domain(_) | Error::Degenerate(_) | Error::Singular(_) => 3,
        Error::Escape { .. } | Error::Budget(_) => 4,
        Error::Io(_) => 5,
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

/// A CSV table held as text cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(&self.header)?;
        for r in &self.rows {
            if r.len() != self.header.len() {
                return Err(Error::Config(format!("row of {} cells under a header of {}", r.len(), self.header.len())));
            }
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
    }
}

/// Rows `t, s, theta, A, phi`.
pub fn trajectory_table(samples: &[TrajectorySample]) -> Table {
    let mut t = Table::new(&["t", "s", "theta", "A", "phi"]);
    for x in samples {
        let p = x.point;
        t.push([x.t, p.s, p.theta, p.area, p.phi].iter().map(|v| fmt_real(*v)).collect());
    }
    t
}

/// Rows `check, point, value, tolerance, pass`; the point coordinates are
/// joined by `;`.
pub fn records_table(records: &[CheckRecord]) -> Table {
    let mut t = Table::new(&["check", "point", "value", "tolerance", "pass"]);
    for r in records {
        t.push(vec![r.check.clone(), r.point.join(";"), r.value.clone(), r.tolerance.clone(), r.pass.to_string()]);
    }
    t
}

/// Writes a plot-data table. An empty series is an error.
pub fn emit_plot_data(table: &Table, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Domain("empty series: nothing to plot".into()));
    }
    write_text(path, &table.to_csv()?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::BundlePoint;

    #[test]
    fn residual_records() {
        let r = CheckRecord::residual("x", "claim", &[0.5], 1e-9, 1e-8);
        assert!(r.pass);
        assert_eq!(r.value, "1.000000000000e-9");
        assert!(!CheckRecord::residual("x", "claim", &[], f64::NAN, 1.0).pass);
        let rep = Report::new("verify", vec![r.clone(), CheckRecord { pass: false, ..r }], Value::Null);
        assert!(!rep.pass);
        assert!(rep.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn plot_data() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        assert!(emit_plot_data(&trajectory_table(&[]), &path).is_err());
        let samples = [TrajectorySample { t: 0.0, point: BundlePoint::new(0.1, 0.0, 0.2, 0.0) }];
        emit_plot_data(&trajectory_table(&samples), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next(), Some("t,s,theta,A,phi"));
        assert_eq!(text.lines().count(), 2);
        assert!(matches!(emit_plot_data(&trajectory_table(&samples), &dir.path().join("no/such")), Err(Error::Io(_))));
    }

    #[test]
    fn exit_codes_are_distinct_by_kind() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::precondition("x")), 3);
        assert_eq!(exit_code(&Error::Classification { message: "x".into(), survivors: vec![] }), 1);
    }
}
