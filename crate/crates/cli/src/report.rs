use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Recorded disagreement with a quoted value; fails only under `--strict`.
    Discrepancy,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub check: String,
    pub outcome: Outcome,
    pub summary: String,
}

/// Result of one command: a row per check for the table, plus full data.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub settings: Value,
    pub rows: Vec<Row>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, settings: Value) -> Self {
        Report {
            command: command.to_string(),
            settings,
            rows: Vec::new(),
            data: Value::Object(Default::default()),
        }
    }

    pub fn row(&mut self, check: impl Into<String>, outcome: Outcome, summary: impl Into<String>) {
        self.rows.push(Row { check: check.into(), outcome, summary: summary.into() });
    }

    pub fn check(&mut self, check: impl Into<String>, ok: bool, summary: impl Into<String>) {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        self.row(check, outcome, summary);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value)?;
        if let Value::Object(map) = &mut self.data {
            map.insert(key.to_string(), v);
        }
        Ok(())
    }

    pub fn exit_code(&self, strict: bool) -> i32 {
        let failed = self.rows.iter().any(|r| match r.outcome {
            Outcome::Fail => true,
            Outcome::Discrepancy => strict,
            _ => false,
        });
        i32::from(failed)
    }

    /// JSON with keys in sorted order (objects go through `serde_json::Value`,
    /// whose maps are ordered).
    pub fn to_json(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }

    pub fn to_table(&self) -> String {
        let w_check = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.command);
        let _ = writeln!(out, "{:<w_check$}  {:<11}  summary", "check", "outcome");
        for r in &self.rows {
            let o = serde_json::to_value(r.outcome).ok();
            let o = o.as_ref().and_then(Value::as_str).unwrap_or("?");
            let _ = writeln!(out, "{:<w_check$}  {:<11}  {}", r.check, o, r.summary);
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Table => Ok(self.to_table()),
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).with_context(|| format!("writing report {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_codes() {
        let mut r = Report::new("t", json!({}));
        assert_eq!(r.exit_code(true), 0);
        r.row("x", Outcome::Discrepancy, "");
        assert_eq!((r.exit_code(false), r.exit_code(true)), (0, 1));
        r.check("y", false, "");
        assert_eq!(r.exit_code(false), 1);
    }

    #[test]
    fn keys_sorted() {
        let mut r = Report::new("t", json!({"zeta": 1, "alpha": 2}));
        r.set("b", 1).unwrap();
        r.set("a", 2).unwrap();
        let text = r.to_json().unwrap();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }
}
