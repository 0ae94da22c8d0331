//! Versioned check reports and their JSON, CSV and text renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// Per-check tolerances. The README carries the same table.
pub mod tol {
    /// Relative error of the cycle integral against the Gamma constant, `n = 1`.
    pub const CONSTANT_N1: f64 = 1e-6;
    /// Relative error of the cycle integral against the Gamma constant, `n = 2`.
    pub const CONSTANT_N2: f64 = 1e-4;
    /// Relative error of the cycle integral against the Gamma constant, `n ≥ 3`.
    pub const CONSTANT_N3: f64 = 1e-3;
    /// Absolute error of the one-dimensional beta integral.
    pub const BETA: f64 = 1e-8;
    /// Absolute error of the leading asymptotic coefficient.
    pub const ASYMPTOTIC: f64 = 1e-6;

    pub fn constant(n: usize) -> f64 {
        match n {
            0 | 1 => CONSTANT_N1,
            2 => CONSTANT_N2,
            _ => CONSTANT_N3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Abs,
    Rel,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
    pub metric: Metric,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    /// Passes iff `|computed - expected| ≤ tolerance` (scaled by `|expected|` for `Metric::Rel`).
    pub fn numeric(id: impl Into<String>, expected: f64, computed: f64, tolerance: f64, metric: Metric) -> Self {
        let diff = (computed - expected).abs();
        let err = if metric == Metric::Rel { diff / expected.abs() } else { diff };
        let status = if err <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            id: id.into(),
            expected: num(expected),
            computed: num(computed),
            status,
            metric,
            tolerance: Some(sig15(tolerance)),
            detail: None,
        }
    }

    /// Passes iff the two renderings are equal.
    pub fn exact(id: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Self {
        let (e, c) = (expected.to_string(), computed.to_string());
        let status = if e == c { Status::Pass } else { Status::Fail };
        Self { id: id.into(), expected: e.into(), computed: c.into(), status, metric: Metric::Exact, tolerance: None, detail: None }
    }

    /// An exact check whose computation failed; the error text is reported as the computed value.
    pub fn failed(id: impl Into<String>, expected: impl ToString, error: impl ToString) -> Self {
        Self {
            id: id.into(),
            expected: expected.to_string().into(),
            computed: format!("error: {}", error.to_string()).into(),
            status: Status::Fail,
            metric: Metric::Exact,
            tolerance: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }
}

/// Rows emitted by CSV mode when a command produces more than its checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub status: Status,
    /// Wall-clock time; the only field that varies between identical runs.
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: &str, inputs: Value, checks: Vec<Check>, table: Option<Table>) -> Self {
        let status = overall(&checks);
        Self { schema: SCHEMA, command: command.into(), inputs, checks, table, status, runtime_ms: 0 }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// The table if the command produced one, otherwise one row per check.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["id", "status", "expected", "computed", "metric", "tolerance"])?;
                for c in &self.checks {
                    w.write_record([
                        c.id.clone(),
                        status_str(c.status).into(),
                        plain(&c.expected),
                        plain(&c.computed),
                        format!("{:?}", c.metric).to_lowercase(),
                        c.tolerance.map(|t| num(t).to_string()).unwrap_or_default(),
                    ])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, status_str(self.status).to_uppercase());
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            out += &format!(
                "  [{}] {:width$}  computed {}  expected {}",
                status_str(c.status),
                c.id,
                plain(&c.computed),
                plain(&c.expected),
            );
            if let Some(t) = c.tolerance {
                out += &format!("  ({} tol {})", format!("{:?}", c.metric).to_lowercase(), num(t));
            }
            out.push('\n');
        }
        out += &format!("  {} ms\n", self.runtime_ms);
        out
    }
}

fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Warn) {
        Status::Warn
    } else {
        Status::Pass
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Warn => "warn",
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Round to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// A JSON number with 15 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::json!(sig15(x))
    } else {
        Value::String(x.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_status() {
        assert_eq!(Check::numeric("a", 1.0, 1.0 + 1e-9, 1e-8, Metric::Abs).status, Status::Pass);
        assert_eq!(Check::numeric("a", 2.0, 2.1, 1e-2, Metric::Rel).status, Status::Fail);
        assert_eq!(Check::exact("b", "-1", "-1").status, Status::Pass);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig15(std::f64::consts::PI).to_string(), "3.14159265358979");
        assert_eq!(sig15(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(num(f64::NAN), Value::String("NaN".into()));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let checks = vec![
            Check::numeric("x", 2.5, 2.500001, 1e-6, Metric::Rel),
            Check::exact("y", "q", "q").with_detail(serde_json::json!({"terms": 2})),
        ];
        let table = Table { headers: vec!["a".into()], rows: vec![vec!["1".into()]] };
        let r = Report::new("demo", serde_json::json!({"n": 1, "k": 0.1}), checks, Some(table));
        let s = r.to_json();
        assert_eq!(Report::from_json(&s).unwrap().to_json(), s);
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn overall_status() {
        let w = Check::exact("a", 1, 1).with_status(Status::Warn);
        assert_eq!(overall(std::slice::from_ref(&w)), Status::Warn);
        assert_eq!(overall(&[w, Check::exact("b", 1, 2)]), Status::Fail);
        assert_eq!(overall(&[]), Status::Pass);
    }
}
