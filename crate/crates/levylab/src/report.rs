//! Machine-readable reports: one JSON document per invocation.
//!
//! Schema v1: `{schema, tool, version, command, inputs, results, traces}`.
//! Objects serialize with sorted keys and no timestamps, so identical
//! invocations produce byte-identical documents.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const TOOL_NAME: &str = "levylab";
pub const SCHEMA_VERSION: u32 = 1;

/// The report document.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub traces: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            tool: TOOL_NAME,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            traces: Vec::new(),
        }
    }

    pub fn input(mut self, key: impl Into<String>, value: impl Into<String>) -> Report {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn results(mut self, results: Value) -> Report {
        self.results = results;
        self
    }

    pub fn traces(mut self, traces: Vec<String>) -> Report {
        self.traces = traces;
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn identical_reports_render_identically() {
        let make = || {
            Report::new("classify")
                .input("source", "corpus:wo-reals")
                .input("rules", "zf")
                .results(json!({"class": "Sigma2"}))
        };
        assert_eq!(make().render(), make().render());
    }

    #[test]
    fn report_fields_are_present() {
        let rendered = Report::new("parse").results(json!({"canonical": "x in y"})).render();
        let value: Value = serde_json::from_str(&rendered).unwrap();
        assert_eq!(value["schema"], json!(SCHEMA_VERSION));
        assert_eq!(value["tool"], json!("levylab"));
        assert_eq!(value["command"], json!("parse"));
        assert!(value["version"].as_str().unwrap().contains('.'));
    }
}
