//! Deterministic artifact writers.
//!
//! CSV files open with a versioned comment line so downstream readers can
//! detect schema drift, and floats are printed with 17 significant digits,
//! enough to round-trip any f64 bit pattern.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

/// Schema tag stamped into the first line of every CSV artifact.
pub const CSV_SCHEMA_VERSION: &str = "copolypin-csv-v1";

/// One float cell. `{:.16e}` carries a full 17 significant digits; infinite
/// values print as `inf`, which keeps the column parseable on curves that
/// leave the localized region.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// In-memory CSV document with the versioned header comment.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(table: &str, columns: &[&str]) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# {CSV_SCHEMA_VERSION} table={table}");
        let _ = writeln!(text, "{}", columns.join(","));
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes an artifact in one shot so a crash cannot leave a half-written
/// file behind, and reruns produce byte-identical output.
pub fn write_artifact(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Emits a JSON report to the output file when one is configured, otherwise
/// to stdout.
pub fn emit_json(output: Option<&str>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => write_artifact(Path::new(path), &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Renders an optional float as JSON, mapping non-finite values to null so
/// the report stays standard JSON.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}
