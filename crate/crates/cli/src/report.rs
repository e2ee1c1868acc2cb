//! Command output: text lines for humans, a versioned JSON document for tools.

use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

/// Why a command did not complete normally.
#[derive(Debug)]
pub enum Failure {
    /// Bad input, or a check on user data that did not hold. Exit code 1.
    Validation(String),
    /// An internal consistency check failed. Exit code 2.
    Invariant(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Invariant(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Invariant(_) => "invariant",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<symdyn::Error> for Failure {
    fn from(e: symdyn::Error) -> Self {
        match e {
            symdyn::Error::Invariant(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

pub type CmdResult = Result<Report, Failure>;

/// Structured result of one command.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    data: Map<String, Value>,
    warnings: Vec<String>,
    /// Set when a check requested by the user did not hold; the report is still printed.
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.data.insert(key.to_owned(), value.into());
        self
    }

    pub fn warn(&mut self, s: impl Into<String>) -> &mut Self {
        self.warnings.push(s.into());
        self
    }

    pub fn fail(&mut self) -> &mut Self {
        self.failed = true;
        self
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn render_text(&self, timing_ms: Option<f64>) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        if let Some(ms) = timing_ms {
            out.push_str(&format!("time: {ms:.1} ms\n"));
        }
        out
    }

    pub fn render_json(&self, command: &[String], timing_ms: Option<f64>) -> String {
        let mut doc = json!({
            "schema": SCHEMA,
            "command": command,
            "ok": !self.failed,
            "result": Value::Object(self.data.clone()),
            "warnings": self.warnings,
        });
        if let Some(ms) = timing_ms {
            doc["timing_ms"] = json!(ms);
        }
        serde_json::to_string_pretty(&doc).expect("JSON values serialize")
    }
}

pub fn render_failure_json(command: &[String], failure: &Failure) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "ok": false,
        "error": { "kind": failure.kind(), "message": failure.message() },
    });
    serde_json::to_string_pretty(&doc).expect("JSON values serialize")
}

pub fn render_failure_text(failure: &Failure) -> String {
    match failure {
        Failure::Validation(m) => format!("error: {m}"),
        Failure::Invariant(m) => format!("internal error: {m}"),
    }
}
