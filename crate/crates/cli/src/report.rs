use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Outcome of one run. `text` and `latex` are the human renderings used by
/// the non-JSON formats.
#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub result: Value,
    pub text: String,
    pub latex: Option<String>,
}

impl Report {
    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), pass, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn render(&self, format: Format, command: &str, config: &Value) -> String {
        match format {
            Format::Json => {
                let doc = json!({
                    "report_version": REPORT_VERSION,
                    "command": command,
                    "config": config,
                    "status": self.status(),
                    "checks": self.checks,
                    "result": self.result,
                });
                serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
            }
            Format::Text | Format::Latex => {
                let mut out = String::new();
                let body = match format {
                    Format::Latex => self.latex.as_deref().unwrap_or(&self.text),
                    _ => &self.text,
                };
                if !body.is_empty() {
                    out.push_str(body.trim_end());
                    out.push('\n');
                }
                for c in &self.checks {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    let _ = write!(out, "{tag} {}", c.name);
                    if !c.detail.is_empty() {
                        let _ = write!(out, " ({})", c.detail);
                    }
                    out.push('\n');
                }
                let _ = writeln!(out, "status: {}", self.status());
                out
            }
        }
    }
}

/// Machine-readable error object for invalid input and downstream failures.
pub fn error_object(kind: &str, message: &str, command: Option<&str>) -> String {
    let doc = json!({
        "report_version": REPORT_VERSION,
        "command": command,
        "status": "error",
        "error": { "kind": kind, "message": message },
    });
    serde_json::to_string_pretty(&doc).expect("error serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_text_rendering() {
        let mut r = Report { text: "body".into(), ..Report::default() };
        r.check("first", true, "");
        assert_eq!(r.status(), "pass");
        r.check("second", false, "off by one");
        let s = r.render(Format::Text, "x", &Value::Null);
        assert_eq!(s, "body\nPASS first\nFAIL second (off by one)\nstatus: fail\n");
        let v: Value = serde_json::from_str(&r.render(Format::Json, "x", &json!({"a": 1}))).unwrap();
        assert_eq!(v["report_version"], REPORT_VERSION);
        assert_eq!(v["config"]["a"], 1);
        assert_eq!(v["checks"][1]["pass"], false);
    }

    #[test]
    fn latex_falls_back_to_text() {
        let r = Report { text: "plain".into(), ..Report::default() };
        assert!(r.render(Format::Latex, "x", &Value::Null).starts_with("plain\n"));
    }
}
