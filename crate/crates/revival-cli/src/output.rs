//! Tables, CSV/JSON emission and the result manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Data {
    Num(Vec<f64>),
    Int(Vec<i64>),
    Text(Vec<String>),
}

impl Data {
    fn len(&self) -> usize {
        match self {
            Data::Num(v) => v.len(),
            Data::Int(v) => v.len(),
            Data::Text(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Data::Num(v) => num(v[i]),
            Data::Int(v) => v[i].to_string(),
            Data::Text(v) => v[i].clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Data::Num(v) => json!(v),
            Data::Int(v) => json!(v),
            Data::Text(v) => json!(v),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
    pub data: Data,
}

impl Column {
    pub fn num(name: impl Into<String>, unit: &'static str, v: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            unit,
            data: Data::Num(v),
        }
    }

    pub fn int(name: impl Into<String>, v: Vec<i64>) -> Self {
        Self {
            name: name.into(),
            unit: "1",
            data: Data::Int(v),
        }
    }

    pub fn text(name: impl Into<String>, v: Vec<String>) -> Self {
        Self {
            name: name.into(),
            unit: "-",
            data: Data::Text(v),
        }
    }

    fn header(&self) -> String {
        format!("{} ({})", self.name, self.unit)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
}

impl Table {
    pub fn push(&mut self, c: Column) {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.data.len(), c.data.len(), "column {} has the wrong length", c.name);
        }
        self.columns.push(c);
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.iter().map(Column::header).collect::<Vec<_>>().join(",");
        s.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self.columns.iter().map(|c| c.data.cell(i)).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    fn schema(&self) -> Vec<ColumnSchema> {
        self.columns
            .iter()
            .map(|c| ColumnSchema {
                name: c.name.clone(),
                unit: c.unit.to_string(),
            })
            .collect()
    }

    fn json_columns(&self) -> Value {
        Value::Object(self.columns.iter().map(|c| (c.name.clone(), c.data.json())).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSchema {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
    pub columns: Vec<ColumnSchema>,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultManifest {
    pub artifact_version: String,
    pub command: String,
    /// The canonical configuration after flag overrides, as TOML.
    pub config: String,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `<command>.csv` or `<command>.json` plus `manifest.json`.
pub fn emit(dir: &Path, command: &str, config: &str, table: &Table, format: Format) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (file, body) = match format {
        Format::Csv => (format!("{command}.csv"), table.to_csv()),
        Format::Json => {
            let inline = json!({
                "artifact_version": ARTIFACT_VERSION,
                "command": command,
                "config": config,
                "schema": table.schema(),
            });
            let doc = json!({ "columns": table.json_columns(), "manifest": inline });
            (format!("{command}.json"), serde_json::to_string_pretty(&doc)? + "\n")
        }
    };
    fs::write(dir.join(&file), &body)?;
    let manifest = ResultManifest {
        artifact_version: ARTIFACT_VERSION.to_string(),
        command: command.to_string(),
        config: config.to_string(),
        outputs: vec![OutputFile {
            file,
            rows: table.rows(),
            columns: table.schema(),
            sha256: sha256_hex(body.as_bytes()),
        }],
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn csv_header_has_units() {
        let mut t = Table::default();
        t.push(Column::num("x", "length", vec![0.5]));
        t.push(Column::int("peaks", vec![3]));
        assert_eq!(t.to_csv(), "x (length),peaks (1)\n5.0000000000000000e-1,3\n");
    }
}
