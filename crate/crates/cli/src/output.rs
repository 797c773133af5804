//! Emission of tables as CSV or JSON, each prefixed by a provenance header.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use bosonic_capacity::ToleranceConfig;
use serde::Serialize;
use serde_json::Value;

/// What produced an output file: recorded at the top of every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<&'static str, Value>,
    pub tolerances: ToleranceConfig,
}

impl Header {
    pub fn new(command: &str, tolerances: ToleranceConfig) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            parameters: BTreeMap::new(),
            tolerances,
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key, value.into());
        self
    }

    /// Header as plain lines, without comment markers.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("{} {}", self.tool, self.version),
            format!("command: {}", self.command),
        ];
        for (k, v) in &self.parameters {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.as_f64().map(fmt9).unwrap_or_else(|| n.to_string()),
                other => other.to_string(),
            };
            out.push(format!("{k} = {v}"));
        }
        let t = &self.tolerances;
        out.push(format!(
            "tolerances: rel_tol={} abs_tol={} max_iterations={} quad_target={}",
            fmt9(t.rel_tol),
            fmt9(t.abs_tol),
            t.max_iterations,
            fmt9(t.quad_target)
        ));
        out
    }
}

/// Rounds to 9 significant digits and prints the shortest representation,
/// switching to exponent form outside `[1e-5, 1e15)`.
pub fn fmt9(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    let mag = rounded.abs();
    if rounded == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Named numeric columns with optional trailing notes.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<(String, f64)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self, header: &Header) -> String {
        let mut s = String::new();
        for line in header.lines() {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt9(v)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        for (k, v) in &self.footer {
            let _ = writeln!(s, "# {k} = {}", fmt9(*v));
        }
        s
    }

    pub fn to_json(&self, header: &Header) -> Result<String> {
        #[derive(Serialize)]
        struct Doc<'a> {
            header: &'a Header,
            columns: &'a [String],
            rows: &'a [Vec<f64>],
            #[serde(skip_serializing_if = "BTreeMap::is_empty")]
            summary: BTreeMap<&'a str, f64>,
        }
        let doc = Doc {
            header,
            columns: &self.columns,
            rows: &self.rows,
            summary: self.footer.iter().map(|(k, v)| (k.as_str(), *v)).collect(),
        };
        json_string(&doc)
    }
}

pub fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
