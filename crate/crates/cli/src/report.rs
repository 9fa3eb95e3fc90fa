use std::fmt;
use std::io::Write;
use std::process::ExitCode;

use serde_json::Value;

use crate::Format;

/// Exit code 1: the input was read but a required property does not hold.
pub const FAILED: u8 = 1;
/// Exit code 2: the input could not be read or is malformed.
pub const INPUT: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(INPUT),
            CliError::Precondition(_) => ExitCode::from(FAILED),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
        }
    }
}

/// Rendered output of a command in both styles, plus its exit status.
pub struct Report {
    pub table: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    pub fn new(table: String, json: Value, code: u8) -> Self {
        Report { table, json, code }
    }

    /// Output that is identical in both styles, e.g. an algebra file.
    pub fn raw(text: String) -> Self {
        let json = serde_json::from_str(&text).unwrap_or(Value::String(text.clone()));
        Report { table: text, json, code: 0 }
    }

    /// Writes to standard output; a closed pipe is not an error.
    pub fn print(&self, format: Format) {
        let text = match format {
            Format::Table => self.table.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
        };
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

/// Left-aligned two-column rows.
pub fn rows(entries: &[(String, String)], indent: usize) -> String {
    let width = entries.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    entries
        .iter()
        .map(|(k, v)| {
            let line = format!("{pad}{k:<width$}  {v}");
            format!("{}\n", line.trim_end())
        })
        .collect()
}

/// Matrix rows with right-aligned columns.
pub fn matrix(rows: &[Vec<String>], indent: usize) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let pad = " ".repeat(indent);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(x, w)| format!("{x:>w$}")).collect();
            format!("{pad}[ {} ]\n", cells.join("  "))
        })
        .collect()
}
