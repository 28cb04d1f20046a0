use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Outcome of one identity check at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub grid: String,
    #[serde(deserialize_with = "null_as_infinity")]
    pub max_abs_err: f64,
    #[serde(deserialize_with = "null_as_infinity")]
    pub max_rel_err: f64,
    pub elapsed_s: f64,
}

// JSON has no infinity; serde_json writes it as null.
fn null_as_infinity<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl IdentityReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            grid: String::new(),
            max_abs_err: 0.0,
            max_rel_err: 0.0,
            elapsed_s: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn grid(mut self, summary: impl Into<String>) -> Self {
        self.grid = summary.into();
        self
    }

    /// Folds one comparison `got` vs `want` into the running maxima; `scale`
    /// is the magnitude the relative error is measured against.
    pub fn record(&mut self, abs_err: f64, scale: f64) {
        let abs_err = if abs_err.is_nan() { f64::INFINITY } else { abs_err };
        self.max_abs_err = self.max_abs_err.max(abs_err);
        let rel = if scale > 0.0 { abs_err / scale } else { abs_err };
        self.max_rel_err = self.max_rel_err.max(rel);
    }

    pub fn with_errors(mut self, abs_err: f64, rel_err: f64) -> Self {
        self.max_abs_err = if abs_err.is_nan() { f64::INFINITY } else { abs_err };
        self.max_rel_err = if rel_err.is_nan() { f64::INFINITY } else { rel_err };
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_s = start.elapsed().as_secs_f64();
        self
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err <= tol
    }
}
