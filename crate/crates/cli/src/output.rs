//! Tabular experiment results and their CSV/JSON renderings.

use anyhow::{Context, Result};
use serde_json::{Map, Value};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

/// Fixed-schema rows produced by one command.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Command output: a metadata object (config echo, seeds, derived
/// constants, wall time) plus the data rows.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub metadata: Map<String, Value>,
    pub table: Table,
}

fn csv_field(value: &Value) -> String {
    let raw = match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

impl ExperimentResult {
    pub fn new(metadata: Map<String, Value>, table: Table) -> Self {
        ExperimentResult { metadata, table }
    }

    /// CSV: `# key = value` metadata comments, then the mandatory header
    /// row, then data. `.` decimal separator, no locale dependence.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let rendered = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "# {key} = {rendered}");
        }
        let _ = writeln!(out, "{}", self.table.columns.join(","));
        for row in &self.table.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, val) in self.table.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), val.clone());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": Value::Object(self.metadata.clone()),
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Writes to `out`, or stdout when no path is given.
    pub fn write_to(&self, format: OutputFormat, out: Option<&Path>) -> Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// f64 -> JSON value, mapping non-finite to null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_layout() {
        let mut metadata = Map::new();
        metadata.insert("n".into(), json!(4));
        metadata.insert("note".into(), json!("fixture"));
        let mut table = Table::new(vec!["a", "b"]);
        table.push(vec![json!(1), json!(0.5)]);
        table.push(vec![json!("x,y"), Value::Null]);
        let result = ExperimentResult::new(metadata, table);
        let csv = result.to_csv();
        assert_eq!(csv, "# n = 4\n# note = fixture\na,b\n1,0.5\n\"x,y\",\n");
    }

    #[test]
    fn json_layout() {
        let mut table = Table::new(vec!["k"]);
        table.push(vec![json!(1)]);
        let result = ExperimentResult::new(Map::new(), table);
        let parsed: Value = serde_json::from_str(&result.to_json()).unwrap();
        assert_eq!(parsed["rows"][0]["k"], json!(1));
    }
}
