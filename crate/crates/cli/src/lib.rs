//! Library side of the `wfp` batch front-end: configuration resolution,
//! the six command implementations, and deterministic file emission.

pub mod commands;
pub mod config;
pub mod output;

/// Command-level error with the process exit code it maps to
/// (2 = config, 3 = numerical).
#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self {
            kind: "config",
            message,
        }
    }

    pub fn numerical(err: wfp_core::Error) -> Self {
        Self {
            kind: "numerical",
            message: err.to_string(),
        }
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            "config" => 2,
            _ => 3,
        }
    }

    /// Machine-readable error object for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({"error": {"kind": self.kind, "message": self.message}}).to_string()
    }
}
