//! Flat, module-namespaced key/value configuration.

use crate::error::CliError;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::Path;

/// Parsed configuration file. Every key must be consumed by the scenario.
#[derive(Debug, Clone, Default)]
pub struct Config {
    remaining: BTreeMap<String, Value>,
    echo: BTreeMap<String, Value>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("not valid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(CliError::Config("top level must be an object of key/value pairs".into()));
        };
        Self::from_map(map)
    }

    pub fn from_map(map: Map<String, Value>) -> Result<Self, CliError> {
        let mut remaining = BTreeMap::new();
        for (k, v) in map {
            if !k.contains('.') {
                return Err(CliError::Config(format!("key '{k}' is not namespaced (expected e.g. 'hsf.l')")));
            }
            let flat = match &v {
                Value::Object(_) => false,
                Value::Array(items) => items.iter().all(|x| !matches!(x, Value::Array(_) | Value::Object(_))),
                _ => true,
            };
            if !flat {
                return Err(CliError::Config(format!("key '{k}' holds a nested value; the format is flat")));
            }
            remaining.insert(k, v);
        }
        Ok(Config { remaining, echo: BTreeMap::new() })
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.remaining.remove(key)
    }

    fn record(&mut self, key: &str, v: Value) {
        self.echo.insert(key.to_string(), v);
    }

    pub fn has(&self, key: &str) -> bool {
        self.remaining.contains_key(key)
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        let x = match self.take(key) {
            None => default,
            Some(v) => as_f64(key, &v)?,
        };
        self.record(key, Value::from(x));
        Ok(x)
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => {
                let x = as_f64(key, &v)?;
                self.record(key, Value::from(x));
                Ok(Some(x))
            }
        }
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        let x = match self.take(key) {
            None => default,
            Some(v) => as_usize(key, &v)?,
        };
        self.record(key, Value::from(x));
        Ok(x)
    }

    pub fn opt_usize(&mut self, key: &str) -> Result<Option<usize>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => {
                let x = as_usize(key, &v)?;
                self.record(key, Value::from(x));
                Ok(Some(x))
            }
        }
    }

    pub fn bool(&mut self, key: &str, default: bool) -> Result<bool, CliError> {
        let b = match self.take(key) {
            None => default,
            Some(Value::Bool(b)) => b,
            Some(v) => return Err(CliError::Config(format!("'{key}' must be true or false, got {v}"))),
        };
        self.record(key, Value::from(b));
        Ok(b)
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String, CliError> {
        let s = match self.take(key) {
            None => default.to_string(),
            Some(Value::String(s)) => s,
            Some(v) => return Err(CliError::Config(format!("'{key}' must be a string, got {v}"))),
        };
        self.record(key, Value::from(s.clone()));
        Ok(s)
    }

    pub fn f64_list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        let xs = match self.take(key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => items.iter().map(|v| as_f64(key, v)).collect::<Result<_, _>>()?,
            Some(v) => vec![as_f64(key, &v)?],
        };
        self.record(key, Value::from(xs.clone()));
        Ok(xs)
    }

    pub fn usize_list(&mut self, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let xs = match self.take(key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => items.iter().map(|v| as_usize(key, v)).collect::<Result<_, _>>()?,
            Some(v) => vec![as_usize(key, &v)?],
        };
        self.record(key, Value::from(xs.clone()));
        Ok(xs)
    }

    /// Overwrites an echoed value with the one actually used.
    pub fn resolve(&mut self, key: &str, v: impl Into<Value>) {
        self.record(key, v.into());
    }

    /// Fails on any key the scenario did not read; returns the resolved echo.
    pub fn finish(self, scenario: &str) -> Result<BTreeMap<String, Value>, CliError> {
        if !self.remaining.is_empty() {
            let keys: Vec<&str> = self.remaining.keys().map(String::as_str).collect();
            return Err(CliError::Config(format!("unknown key(s) for scenario '{scenario}': {}", keys.join(", "))));
        }
        Ok(self.echo)
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| CliError::Config(format!("'{key}' must be a finite number, got {v}")))
}

fn as_usize(key: &str, v: &Value) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| CliError::Config(format!("'{key}' must be a non-negative integer, got {v}")))
}
