//! Library side of the `qlax` command-line tool: problem files, report
//! rendering and the verification commands.
//!
//! Every command returns an [`Outcome`]; the binary prints it and maps
//! `passed` to the exit code.

pub mod commands;
pub mod problem;
pub mod render;

use serde_json::Value;
use thiserror::Error;

pub use commands::{
    cmd_commutator, cmd_convergence, cmd_kdv_verify, cmd_lax_solve, cmd_symmetry, Settings,
};
pub use problem::{Backend, ProblemFile};

/// Input errors. All of them map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] qlax_core::ParseError),
    #[error(transparent)]
    Algebra(#[from] qlax_core::AlgebraError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Validation(String),
}

/// The result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub json: Value,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    /// `QLAX_FORMAT` wins over the command-line flag.
    pub fn resolve(flag: Format, env: Option<&str>) -> Result<Format, CliError> {
        match env.map(str::trim) {
            None | Some("") => Ok(flag),
            Some(v) if v.eq_ignore_ascii_case("json") => Ok(Format::Json),
            Some(v) if v.eq_ignore_ascii_case("text") => Ok(Format::Text),
            Some(v) => Err(CliError::Validation(format!(
                "QLAX_FORMAT must be `json` or `text`, got `{v}`"
            ))),
        }
    }
}

pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            exit::PASS
        } else {
            exit::FAIL
        }
    }

    /// Rendered output; JSON output is pretty-printed with sorted keys.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
        }
    }
}
