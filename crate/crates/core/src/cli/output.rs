use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::catalog::Conventions;

#[derive(Clone, Debug, Serialize)]
pub struct TaskRecord {
    pub index: usize,
    pub op: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    pub verdict: String,
    pub ok: bool,
    pub details: Map<String, Value>,
}

/// Everything a `run` prints, in a stable order.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub seed: u64,
    pub conventions: Conventions,
    pub tasks: Vec<TaskRecord>,
    pub ok: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "exformal {} (seed {})", self.version, self.seed);
        for t in &self.tasks {
            let mark = if t.ok { "ok  " } else { "FAIL" };
            let label = t.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
            let expect = t.expect.as_deref().map(|e| format!(" (expected {e})")).unwrap_or_default();
            let _ = writeln!(out, "{mark} #{} {}{label}: {}{expect}", t.index, t.op, t.verdict);
            for (k, v) in &t.details {
                let _ = writeln!(out, "       {k}: {}", render(v));
            }
        }
        let passed = self.tasks.iter().filter(|t| t.ok).count();
        let _ = writeln!(out, "{passed}/{} tasks ok", self.tasks.len());
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
