//! Rendering and emission of command reports: JSON or CSV, written to
//! standard output or atomically to a file (temp file + rename, so a
//! failed run never leaves a partial artifact).

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::CmdError;

/// Report format. JSON is the default for scalar reports; grid samples
/// default to CSV.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Tabular view of a report, used by the CSV format for enumerations.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// A finished command: the JSON report, an optional tabular view for
/// the CSV format, an optional pre-rendered CSV body that takes
/// precedence over both (grid samples), and an optional verification
/// failure that turns into exit code 1 after the report is written.
pub struct CommandOutput {
    pub report: Value,
    pub table: Option<Table>,
    pub raw_csv: Option<String>,
    pub failure: Option<String>,
}

impl CommandOutput {
    pub fn report_only(report: Value) -> Self {
        CommandOutput {
            report,
            table: None,
            raw_csv: None,
            failure: None,
        }
    }
}

/// Render a command's output in the requested format. Deterministic:
/// object keys are sorted by the JSON layer and floats print in their
/// shortest round-trip form.
pub fn render(format: Format, out: &CommandOutput) -> String {
    match format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(&out.report).expect("report serialization");
            text.push('\n');
            text
        }
        Format::Csv => {
            if let Some(raw) = &out.raw_csv {
                raw.clone()
            } else if let Some(table) = &out.table {
                render_table(table)
            } else {
                render_pairs(&out.report)
            }
        }
    }
}

fn render_table(table: &Table) -> String {
    let mut text = table.header.join(",");
    text.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

/// CSV view of a scalar report: one `key,value` row per leaf of the
/// JSON tree, with dotted paths for nesting and indices for arrays.
fn render_pairs(report: &Value) -> String {
    let mut pairs = Vec::new();
    flatten("", report, &mut pairs);
    let mut text = String::from("key,value\n");
    for (key, value) in pairs {
        text.push_str(&csv_field(&key));
        text.push(',');
        text.push_str(&csv_field(&value));
        text.push('\n');
    }
    text
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let child = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&child(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&child(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write the rendered text to the output path atomically, or to
/// standard output when no path is given.
pub fn emit(out_path: &Option<PathBuf>, text: &str) -> Result<(), CmdError> {
    match out_path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CmdError::Malformed(format!("cannot write to standard output: {e}")))
        }
        Some(path) => atomic_write(path, text),
    }
}

fn atomic_write(path: &Path, text: &str) -> Result<(), CmdError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let write = || -> std::io::Result<()> {
        let mut tmp = tempfile::Builder::new().prefix(".bhe-out-").tempfile_in(dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file_mut().flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    };
    write().map_err(|e| CmdError::Malformed(format!("cannot write {}: {e}", path.display())))
}
