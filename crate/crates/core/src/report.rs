//! The JSON report envelope.
//!
//! Every report has the shape
//! `{schema_version, meta, model, results, diagnostics}`. Everything that
//! varies between identical runs (wall-clock time, durations) lives in
//! `meta`; the other fields are a pure function of config and seed.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Residuals are written as decimal strings so they survive any JSON
/// reader without rounding.
pub fn decimal<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{x:e}"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub unix_time: u64,
    pub elapsed_seconds: f64,
}

impl Meta {
    pub fn new(subcommand: &str, elapsed_seconds: f64) -> Self {
        let unix_time = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            unix_time,
            elapsed_seconds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub meta: Meta,
    pub model: Value,
    pub results: Value,
    pub diagnostics: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report values are always serializable");
        text.push('\n');
        text
    }
}

/// The report with `meta` removed, for comparing two runs.
pub fn without_meta(report_json: &str) -> serde_json::Result<String> {
    let mut v: Value = serde_json::from_str(report_json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("meta");
    }
    serde_json::to_string(&v)
}

pub fn diagnostics(warnings: &[String], tolerances: &impl Serialize) -> Value {
    json!({ "warnings": warnings, "tolerances": tolerances })
}
