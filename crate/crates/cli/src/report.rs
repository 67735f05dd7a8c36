use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub bytes: u64,
}

impl InputInfo {
    pub fn new(path: &Path, bytes: usize) -> Self {
        Self {
            path: path.display().to_string(),
            bytes: bytes as u64,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CliReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: Vec<InputInfo>,
    pub config: Value,
    pub results: Value,
    pub elapsed_ms: f64,
}

impl CliReport {
    pub fn new(command: &'static str, started: Instant) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: Vec::new(),
            config: Value::Null,
            results: Value::Null,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    /// Stdout normally; stderr when stdout already carries the data stream.
    pub fn emit(&self, stdout_busy: bool) {
        let json = serde_json::to_string_pretty(self).expect("report serializes");
        if stdout_busy {
            eprintln!("{json}");
        } else {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{json}");
        }
    }
}
