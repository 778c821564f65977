// SPDX-License-Identifier: Apache-2.0

//! Sweep tables and their CSV / JSON renderings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Format, Grid};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// Everything needed to regenerate a table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub channel: String,
    pub seed: u64,
    pub samples: u64,
    pub grids: BTreeMap<String, Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

impl Metadata {
    pub fn new(command: &str, channel: String, seed: u64, samples: u64) -> Metadata {
        Metadata {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            channel,
            seed,
            samples,
            grids: BTreeMap::new(),
            target: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub metadata: Metadata,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new(metadata: Metadata) -> SweepTable {
        SweepTable { metadata, columns: Vec::new(), rows: Vec::new() }
    }

    pub fn column(mut self, name: &str, unit: &str) -> SweepTable {
        self.columns.push(Column { name: name.into(), unit: unit.into() });
        self
    }

    /// A Monte Carlo column followed by its `_err` sibling.
    pub fn mc_column(self, name: &str, unit: &str) -> SweepTable {
        let err = format!("{name}_err");
        self.column(name, unit).column(&err, unit)
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the columns");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of one column, top to bottom.
    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header row plus one line per row, shortest round-trip decimals, `\n` line ends.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str())).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format!("{x:?}"))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is ASCII")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialisation cannot fail");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes to `out` or stdout. A CSV file gets its metadata in a `.meta.json` sidecar.
    pub fn write(&self, format: Format, out: Option<&Path>) -> CliResult<()> {
        let body = self.render(format);
        match out {
            None => {
                std::io::stdout().lock().write_all(body.as_bytes())?;
            }
            Some(path) => {
                write_file(path, &body)?;
                if format == Format::Csv {
                    let mut meta = serde_json::to_string_pretty(&self.metadata).expect("metadata serialisation");
                    meta.push('\n');
                    write_file(&sidecar_path(path), &meta)?;
                }
            }
        }
        Ok(())
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn write_file(path: &Path, body: &str) -> CliResult<()> {
    std::fs::write(path, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        let mut t = SweepTable::new(Metadata::new("test", "identity".into(), 7, 100))
            .column("param", "1")
            .mc_column("e_C", "ebit");
        t.push_row(vec![0.0, 0.1, 1e-7]);
        t.push_row(vec![1.0, 1.0 / 3.0, 2.5e-17]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "param,e_C,e_C_err");
        assert_eq!(lines[1], "0.0,0.1,1e-7");
        assert!(!csv.contains('\r'));
        let parsed: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(parsed, vec![1.0, 1.0 / 3.0, 2.5e-17]);
    }

    #[test]
    fn json_round_trips_values() {
        let t = sample();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][1][1].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["columns"][1]["unit"], "ebit");
        assert_eq!(v["metadata"]["seed"], 7);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.json"));
    }
}
