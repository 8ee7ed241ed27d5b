//! Versioned JSON reports and machine-readable error objects.

use std::collections::BTreeMap;
use std::path::Path;

use periomax_core::peaks::TestReport;
use serde::{Deserialize, Serialize};

use crate::errors::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Per-run diagnostics for the observed-data test pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub q: usize,
    /// Whether the sample mean was subtracted before analysis.
    pub centered: bool,
    /// The mean that was removed (0 when centering is off).
    pub removed_mean: f64,
    /// Lag-window bandwidth actually used.
    pub bandwidth: usize,
    /// Number of grid frequencies clamped to the density floor.
    pub floor_count: usize,
    /// Mean normalized ordinate; near 1 when the density fits the data.
    pub normalized_sum: f64,
    /// Relative energy gap between the series and its periodogram.
    pub parseval_gap: f64,
}

/// Top-level result document. Parsing a report and re-serializing it
/// reproduces the bytes: field order is fixed and nested maps iterate in
/// sorted key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// Fully resolved settings: flags, config file, and defaults merged.
    pub inputs: serde_json::Value,
    /// Test outcome (the `test` command).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test: Option<TestReport>,
    /// Suite-specific results (the `mc` subcommands).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    pub warnings: Vec<String>,
    /// Wall-clock duration; the only field exempt from byte reproducibility.
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, serde_json::Value>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: serde_json::Value::Object(inputs.into_iter().collect()),
            test: None,
            results: None,
            diagnostics: None,
            warnings: Vec::new(),
            timing_ms: 0,
        }
    }

    /// Serializes a typed results payload into the report.
    pub fn set_results<T: Serialize>(&mut self, results: &T) -> CliResult<()> {
        self.results = Some(
            serde_json::to_value(results)
                .map_err(|e| CliError::Data(format!("cannot serialize results: {e}")))?,
        );
        Ok(())
    }
}

/// Rejects non-finite numbers, which serde_json would silently turn into
/// nulls; reports must stay fully machine-readable.
fn assert_finite(value: &serde_json::Value, path: &str) -> CliResult<()> {
    match value {
        serde_json::Value::Null => {
            Err(CliError::Data(format!("report field {path} is null (non-finite number?)")))
        }
        serde_json::Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                assert_finite(item, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                assert_finite(v, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Writes the report as pretty JSON to the path, or stdout when absent.
pub fn write_report(report: &Report, out: Option<&Path>) -> CliResult<()> {
    let value = serde_json::to_value(report)
        .map_err(|e| CliError::Data(format!("cannot serialize report: {e}")))?;
    assert_finite(&value, "report")?;
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| CliError::Data(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Prints the machine-readable error object to stderr.
pub fn emit_error(error: &CliError) {
    let object = serde_json::json!({
        "error": { "kind": error.kind(), "message": error.to_string() }
    });
    eprintln!("{object}");
}

/// Convenience builder for the resolved-inputs echo.
#[derive(Debug, Default)]
pub struct Echo(pub BTreeMap<String, serde_json::Value>);

impl Echo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        // Settings echoes are plain scalars and short lists; serialization
        // cannot fail for them.
        self.0.insert(key.to_string(), serde_json::to_value(value).expect("echo value"));
    }
}
