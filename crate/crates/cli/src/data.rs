//! Single-column CSV input and output.

use std::path::Path;

use crate::errors::{CliError, CliResult};

/// Reads a single-column numeric CSV. The first line may be a header; every
/// other line must parse as a finite number. Blank lines are skipped.
pub fn read_series(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text, &path.display().to_string())
}

/// Parses CSV text; `origin` names the source in error messages.
fn parse_series(text: &str, origin: &str) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(CliError::Data(format!(
                    "{origin}: line {}: non-finite value {v}",
                    idx + 1
                )))
            }
            // Only the very first line may be a non-numeric header.
            Err(_) if idx == 0 => {}
            Err(_) => {
                return Err(CliError::Data(format!(
                    "{origin}: line {}: not a number: '{cell}'",
                    idx + 1
                )))
            }
        }
    }
    if values.len() < 4 {
        return Err(CliError::Data(format!(
            "{origin}: need at least 4 observations, got {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Renders values as a single-column CSV document with a header row.
pub fn render_series(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20 + 6);
    out.push_str("value\n");
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Writes a single-column CSV to a file, or to stdout when no path is given.
pub fn write_series(out: Option<&Path>, values: &[f64]) -> CliResult<()> {
    let text = render_series(values);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
