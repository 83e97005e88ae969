use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Ok = 0,
    Rejected = 1,
    Parse = 2,
    Codec = 3,
    Invariant = 4,
    Undetermined = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// What a command hands back before the report is assembled.
pub struct Outcome {
    pub exit: Exit,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn new(exit: Exit, result: Value) -> Self {
        Outcome { exit, result, diagnostics: Vec::new() }
    }

    pub fn fail(exit: Exit, message: impl Into<String>) -> Self {
        Outcome { exit, result: Value::Null, diagnostics: vec![message.into()] }
    }

    pub fn note(mut self, message: impl Into<String>) -> Self {
        self.diagnostics.push(message.into());
        self
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub command: &'a str,
    pub input: Value,
    pub config: &'a RunConfig,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub exit: Exit,
    pub exit_code: i32,
    /// Wall-clock milliseconds; the only field that varies between runs.
    pub duration_ms: f64,
}

impl Report<'_> {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# arith {}\n", self.command);
        let _ = writeln!(out, "exit: {} ({:?})\n", self.exit_code, self.exit);
        let _ = writeln!(out, "## config\n\n| key | value |\n|---|---|");
        if let Value::Object(map) = serde_json::to_value(self.config).expect("config serializes") {
            for (k, v) in map {
                let _ = writeln!(out, "| {k} | {} |", scalar(&v));
            }
        }
        let _ = writeln!(out, "\n## input\n\n```json\n{}\n```", pretty(&self.input));
        let _ = writeln!(out, "\n## result\n");
        match &self.result {
            Value::Object(map) => {
                for (k, v) in map {
                    match v {
                        Value::Object(_) | Value::Array(_) => {
                            let _ = writeln!(out, "### {k}\n\n```json\n{}\n```\n", pretty(v));
                        }
                        _ => {
                            let _ = writeln!(out, "- **{k}**: {}", scalar(v));
                        }
                    }
                }
            }
            other => {
                let _ = writeln!(out, "```json\n{}\n```", pretty(other));
            }
        }
        if !self.diagnostics.is_empty() {
            let _ = writeln!(out, "\n## diagnostics\n");
            for d in &self.diagnostics {
                let _ = writeln!(out, "- {d}");
            }
        }
        let _ = writeln!(out, "\nduration: {:.3} ms", self.duration_ms);
        out
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
