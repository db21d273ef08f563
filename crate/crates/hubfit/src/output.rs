//! Deterministic CSV/JSON emission with a manifest header.
//!
//! Every output file carries the manifest as `#`-prefixed comment lines:
//! tool, version, subcommand, schema tag, and the fully resolved config.
//! Numbers are printed with 15 significant digits, `.` decimal, no locale;
//! identical config and version give byte-identical files. Wall time is
//! reported on stderr only, never in the file.

use crate::error::Result;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Output format of the emitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Format a float with 15 significant digits, locale-free.
pub fn fmt_g15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.14e}")
}

/// One cell of a row: a number, a string tag, or empty.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_g15(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::Value::String(fmt_g15(*x)),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// An output table: schema tag, manifest pairs, column names, rows.
pub struct Table {
    pub subcommand: String,
    pub schema: String,
    pub config_pairs: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(subcommand: &str, schema: &str, config_pairs: Vec<(String, String)>, columns: &[&str]) -> Self {
        Table {
            subcommand: subcommand.to_string(),
            schema: schema.to_string(),
            config_pairs,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn manifest_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# hubfit {} v{}", self.subcommand, env!("CARGO_PKG_VERSION")),
            format!("# schema = {}", self.schema),
        ];
        for (k, v) in &self.config_pairs {
            lines.push(format!("# config: {k} = {v}"));
        }
        lines
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in self.manifest_lines() {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut root = serde_json::Map::new();
        root.insert("tool".into(), "hubfit".into());
        root.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        root.insert("subcommand".into(), self.subcommand.clone().into());
        root.insert("schema".into(), self.schema.clone().into());
        let mut cfg = serde_json::Map::new();
        for (k, v) in &self.config_pairs {
            cfg.insert(k.clone(), v.clone().into());
        }
        root.insert("config".into(), cfg.into());
        root.insert(
            "columns".into(),
            serde_json::Value::Array(self.columns.iter().map(|c| c.clone().into()).collect()),
        );
        root.insert(
            "rows".into(),
            serde_json::Value::Array(
                self.rows
                    .iter()
                    .map(|r| serde_json::Value::Array(r.iter().map(Cell::json).collect()))
                    .collect(),
            ),
        );
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(root)).unwrap();
        s.push('\n');
        s
    }

    /// Write to `<out_dir>/<name>.(csv|json)` and return the path.
    pub fn write(&self, out_dir: &Path, name: &str, format: OutputFormat) -> Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let (ext, body) = match format {
            OutputFormat::Csv => ("csv", self.to_csv()),
            OutputFormat::Json => ("json", self.to_json()),
        };
        let path = out_dir.join(format!("{name}.{ext}"));
        std::fs::write(&path, body)?;
        Ok(path)
    }
}
