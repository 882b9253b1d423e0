//! Reports in two renderings: line-oriented text and canonical JSON.

use serde_json::{json, Value};

use hcomoment::foundation::Rational;

use crate::artifact::sorted;
use crate::terms::coeff_string;

/// Process outcome; the exit code is a function of this alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Usage,
    Invalid,
    Obstructed,
    Inconclusive,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Usage => 1,
            Status::Invalid => 2,
            Status::Obstructed => 3,
            Status::Inconclusive => 4,
            Status::VerificationFailed => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Usage => "usage error",
            Status::Invalid => "validation failure",
            Status::Obstructed => "obstructed",
            Status::Inconclusive => "inconclusive",
            Status::VerificationFailed => "verification failure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    lines: Vec<String>,
    data: serde_json::Map<String, Value>,
    status: Status,
    timing_ms: Option<f64>,
}

pub fn rat(q: &Rational) -> Value {
    Value::String(coeff_string(q))
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            lines: Vec::new(),
            data: serde_json::Map::new(),
            status: Status::Ok,
            timing_ms: None,
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Keep the most severe status seen so far.
    pub fn fail(&mut self, status: Status) {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Inconclusive => 1,
            Status::Obstructed => 2,
            Status::VerificationFailed => 3,
            Status::Invalid => 4,
            Status::Usage => 5,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Set `section.key` in the machine rendering.
    pub fn set(&mut self, section: &str, key: &str, value: Value) {
        let entry = self
            .data
            .entry(section.to_string())
            .or_insert_with(|| Value::Object(serde_json::Map::new()));
        if let Value::Object(m) = entry {
            m.insert(key.to_string(), value);
        }
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.data.get(section)?.get(key)
    }

    /// A verdict appears in both renderings.
    pub fn verdict(&mut self, key: &str, value: Value, text: impl Into<String>) {
        self.line(format!("{key}: {}", text.into()));
        self.set("verdicts", key, value);
    }

    pub fn error(&mut self, status: Status, message: impl Into<String>) {
        let message = message.into();
        self.line(format!("error: {message}"));
        let errors = self
            .data
            .entry("errors".to_string())
            .or_insert_with(|| Value::Array(Vec::new()));
        if let Value::Array(a) = errors {
            a.push(Value::String(message));
        }
        self.fail(status);
    }

    pub fn set_timing(&mut self, ms: f64) {
        self.timing_ms = Some(ms);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => {
                let mut out = format!("command: {}\n", self.command);
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                if let Some(t) = self.timing_ms {
                    out.push_str(&format!("time: {t:.3} ms\n"));
                }
                out.push_str(&format!(
                    "status: {} (exit {})\n",
                    self.status.label(),
                    self.exit_code()
                ));
                out
            }
            Format::Machine => {
                let mut v = Value::Object(self.data.clone());
                if let Value::Object(m) = &mut v {
                    m.insert("command".into(), json!(self.command));
                    m.insert("status".into(), json!(self.status.label()));
                    m.insert("exit_code".into(), json!(self.exit_code()));
                    if let Some(t) = self.timing_ms {
                        m.insert("timing_ms".into(), json!(t));
                    }
                }
                let mut s = serde_json::to_string_pretty(&sorted(&v)).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}
