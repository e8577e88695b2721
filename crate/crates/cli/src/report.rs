use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

/// A finished command: human text, machine summary and exit code.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Output {
    pub fn new(text: String, json: Value, code: u8) -> Self {
        Output { text, json, code }
    }

    /// Write errors (a closed pipe, say) are ignored.
    pub fn print(&self, format: Format) {
        let mut out = std::io::stdout().lock();
        let _ = match format {
            Format::Text => out.write_all(self.text.as_bytes()),
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json).expect("serializable")),
        };
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn print(&self, format: Format) {
        eprintln!("error: {}", self.message);
        if format == Format::Json {
            let v = serde_json::json!({ "status": "error", "exit_code": self.code, "message": self.message });
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
}

impl From<sl2kit::Error> for CliError {
    fn from(e: sl2kit::Error) -> Self {
        let code = match e {
            sl2kit::Error::ElementCapExceeded(_) => EXIT_LIMIT,
            _ => EXIT_CONFIG,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub fn mark(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
