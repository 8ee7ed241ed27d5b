//! Flat key-value configuration with flag precedence.
//!
//! A config file is a flat TOML document whose keys mirror the long flag
//! names (`method = "fisher"`, `eta = 0.3`, `no-center = true`). Flags win
//! over config values; the `PERIOMAX_SEED` environment variable fills in the
//! seed when neither source provides one. Keys are validated against the
//! full flag vocabulary so one file can drive several subcommands while
//! typos are still rejected.

use std::path::Path;

use crate::errors::{CliError, CliResult};

/// Union of the keys any subcommand understands.
const KNOWN_KEYS: &[&str] = &[
    // test pipeline
    "input", "method", "r", "beta", "kernel", "eta", "floor", "no-center", "seed", "reps",
    "workers", "out",
    // process description
    "process", "innovation", "nu", "pareto-s", "coeffs", "rho", "kappa", "len", "min-j", "a",
    "transform", "clip-c", "phi", "phi-pos", "phi-neg", "garch-omega", "garch-alpha",
    "garch-beta", "bilinear-a", "bilinear-b", "burn-in",
    // experiment suites
    "n", "density", "gamma", "phase", "amplitudes", "alpha", "p", "k-list", "n-list", "m-eta",
    "cond-reps", "export-samples",
    // thresholds
    "ks-threshold", "ks-exact-threshold", "min-rejection", "min-recovery", "max-z",
    "require-decreasing", "require-pass",
];

/// A loaded (possibly empty) flat config table.
pub struct Config {
    table: toml::Table,
}

impl Config {
    /// Loads and validates the file, or returns an empty table when no path
    /// was given.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self { table: toml::Table::new() });
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Builds a config from inline text; for other modules' unit tests.
    #[cfg(test)]
    pub fn parse_for_tests(text: &str) -> Self {
        Self::parse(text, "inline-test-config").unwrap()
    }

    /// Parses and validates config text; `origin` names it in errors.
    fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::Config(format!("config {origin} is not valid TOML: {e}")))?;
        for (key, value) in &table {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown config key '{key}'")));
            }
            if value.is_table() {
                return Err(CliError::Config(format!(
                    "config key '{key}' is a table; the config format is flat"
                )));
            }
        }
        Ok(Self { table })
    }

    fn get(&self, key: &str) -> Option<&toml::Value> {
        self.table.get(key)
    }

    fn type_err<T>(key: &str, want: &str, got: &toml::Value) -> CliResult<T> {
        Err(CliError::Config(format!("config key '{key}' must be {want}, got {got}")))
    }

    pub fn f64(&self, key: &str) -> CliResult<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Self::type_err(key, "a number", other),
        }
    }

    pub fn u64(&self, key: &str) -> CliResult<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Self::type_err(key, "a nonnegative integer", other),
        }
    }

    pub fn usize(&self, key: &str) -> CliResult<Option<usize>> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    pub fn i64(&self, key: &str) -> CliResult<Option<i64>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) => Ok(Some(*v)),
            Some(other) => Self::type_err(key, "an integer", other),
        }
    }

    pub fn bool(&self, key: &str) -> CliResult<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::Boolean(v)) => Ok(Some(*v)),
            Some(other) => Self::type_err(key, "a boolean", other),
        }
    }

    pub fn string(&self, key: &str) -> CliResult<Option<String>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Self::type_err(key, "a string", other),
        }
    }

    /// A list of numbers, written either as a TOML array or as a
    /// comma-separated string.
    pub fn f64_list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => parse_f64_list(s, key).map(Some),
            Some(toml::Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    match item {
                        toml::Value::Float(v) => out.push(*v),
                        toml::Value::Integer(v) => out.push(*v as f64),
                        other => return Self::type_err(key, "numbers", other),
                    }
                }
                Ok(Some(out))
            }
            Some(other) => Self::type_err(key, "a list of numbers", other),
        }
    }

    /// Parses a config string through a clap value enum, so config values
    /// share the flag vocabulary exactly.
    pub fn value_enum<T: clap::ValueEnum>(&self, key: &str) -> CliResult<Option<T>> {
        self.string(key)?
            .map(|s| {
                T::from_str(&s, true)
                    .map_err(|e| CliError::Config(format!("config key '{key}': {e}")))
            })
            .transpose()
    }
}

/// Parses "0.1, 0.5,2" style lists from flags and config strings.
pub fn parse_f64_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a number")))
        })
        .collect()
}

/// Parses "512,2048" style lists of sizes.
pub fn parse_usize_list(text: &str, what: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a nonnegative integer")))
        })
        .collect()
}

/// Flag wins, then config, then the default.
pub fn pick<T>(flag: Option<T>, cfg: Option<T>, default: T) -> T {
    flag.or(cfg).unwrap_or(default)
}

/// Flag wins, then config; absence is a config error naming the key.
pub fn pick_required<T>(flag: Option<T>, cfg: Option<T>, key: &str) -> CliResult<T> {
    flag.or(cfg).ok_or_else(|| CliError::Config(format!("missing required setting '--{key}'")))
}

/// Seed precedence: flag, config, then the PERIOMAX_SEED environment
/// variable, then 0.
pub fn resolve_seed(flag: Option<u64>, cfg: &Config) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = cfg.u64("seed")? {
        return Ok(s);
    }
    match std::env::var("PERIOMAX_SEED") {
        Ok(v) => v.trim().parse::<u64>().map_err(|_| {
            CliError::Config(format!("PERIOMAX_SEED must be an unsigned integer, got '{v}'"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Config(format!("PERIOMAX_SEED is not readable: {e}"))),
    }
}
