//! Run configuration: command-line flags override the `CLAB_CONFIG` file,
//! which overrides the built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clab_core::coalescence::DEFAULT_ORACLE_GUARD;
use clab_core::qh_satake::DEFAULT_EIGEN_GUARD;

pub const CONFIG_ENV: &str = "CLAB_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub sieve_limit: u64,
    pub oracle_guard: u64,
    pub eigen_guard: usize,
    pub tolerances: BTreeMap<String, f64>,
    /// `None` lets each subcommand pick its natural format.
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sieve_limit: 1_000_000,
            oracle_guard: DEFAULT_ORACLE_GUARD,
            eigen_guard: DEFAULT_EIGEN_GUARD,
            tolerances: BTreeMap::from([("residual".to_string(), 1e-8)]),
            format: None,
            output: None,
        }
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub sieve_limit: Option<u64>,
    pub oracle_guard: Option<u64>,
    pub eigen_guard: Option<usize>,
    pub tolerances: Vec<(String, f64)>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value '{value}' for '{key}'"))
}

impl RunConfig {
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "sieve_limit" => self.sieve_limit = parse_num(key, value)?,
            "oracle_guard" => self.oracle_guard = parse_num(key, value)?,
            "eigen_guard" => self.eigen_guard = parse_num(key, value)?,
            "format" => {
                self.format = Some(match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(format!("unknown format '{value}'")),
                })
            }
            "output" => self.output = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tol.") {
                Some(name) if self.tolerances.contains_key(name) => {
                    let v = parse_num(key, value)?;
                    self.tolerances.insert(name.to_string(), v);
                }
                _ => return Err(format!("unknown configuration key '{key}'")),
            },
        }
        Ok(())
    }

    /// Reads a flat `key = value` file; blank lines and `#` comments are
    /// skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), i + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) -> Result<(), String> {
        if let Some(v) = o.sieve_limit {
            self.sieve_limit = v;
        }
        if let Some(v) = o.oracle_guard {
            self.oracle_guard = v;
        }
        if let Some(v) = o.eigen_guard {
            self.eigen_guard = v;
        }
        for (name, v) in &o.tolerances {
            self.set(&format!("tol.{name}"), &v.to_string())?;
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        if o.output.is_some() {
            self.output.clone_from(&o.output);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.oracle_guard == 0 || self.eigen_guard == 0 || self.sieve_limit == 0 {
            return Err("guards and the sieve limit must be positive".into());
        }
        for (name, &v) in &self.tolerances {
            if !(v > 0.0 && v < 1.0) {
                return Err(format!("tolerance '{name}' = {v} must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// Defaults, then the file named by `CLAB_CONFIG` (if set), then flags.
    pub fn resolve(config_file: Option<&Path>, o: &Overrides) -> Result<Self, String> {
        let mut cfg = Self::default();
        if let Some(path) = config_file {
            cfg.apply_file(path)?;
        }
        cfg.apply_overrides(o)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
