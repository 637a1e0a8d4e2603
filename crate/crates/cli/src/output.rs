use std::io::Write;

use serde::Serialize;

use crate::error::CliError;

/// Rows of numbers under fixed column names, plus `name,value` summary lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub summary: Vec<(String, f64)>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn summary_value(&self, name: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with a header row; summary entries follow as `# name,value` lines.
pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(&table.columns)?;
    for row in &table.rows {
        wtr.write_record(row.iter().map(|&x| format_number(x)))?;
    }
    let mut out = wtr.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    for (name, value) in &table.summary {
        writeln!(out, "# {name},{}", format_number(*value))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
