//! Tabular output. Formatting is fixed so identical runs give identical bytes.

use std::io::Write;

use serde_json::{json, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// Named columns with units; a missing value is `None` (no feature found).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    /// Extra `key = value` metadata, in insertion order.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            meta: vec![],
            columns: vec![],
            rows: vec![],
        }
    }

    pub fn column(mut self, name: &str, unit: &str) -> Self {
        self.columns.push(Column {
            name: name.into(),
            unit: unit.into(),
        });
        self
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, hash: &str, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(hash, out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json(hash))?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, hash: &str, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# neqcp {}", self.command)?;
        writeln!(out, "# config_sha256 = {hash}")?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}")?;
        }
        let header: Vec<String> = self.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.map_or("nan".into(), fmt)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn to_json(&self, hash: &str) -> Value {
        let meta: serde_json::Map<String, Value> =
            self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let columns: Vec<Value> = self.columns.iter().map(|c| json!({"name": c.name, "unit": c.unit})).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|v| v.map_or(Value::Null, |x| json!(round12(x)))).collect()))
            .collect();
        json!({
            "command": self.command,
            "config_sha256": hash,
            "meta": meta,
            "columns": columns,
            "rows": rows,
        })
    }
}

/// Twelve significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn round12(x: f64) -> f64 {
    fmt(x).parse().expect("formatted float parses")
}
