//! Surface syntax: domain files, state files, ground terms and workloads.

use std::fmt;

use serde::Serialize;

pub mod lex;
mod parse;
mod unparse;

pub use parse::{
    aspect_path_at, disjointness_at, parse_actions, parse_domain, parse_ground_action, parse_ground_fluent, parse_state, parse_workload, StateSpec,
    WorkloadSpec,
};
pub use unparse::unparse_domain;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub len: usize,
}

impl SourceSpan {
    pub fn new(file: &str, line: usize, col: usize, len: usize) -> Self {
        SourceSpan { file: file.to_string(), line, col, len: len.max(1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
    pub hint: Option<String>,
}

impl ParseDiagnostic {
    pub fn error(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Error, span, message: message.into(), hint: None }
    }

    pub fn warning(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Warning, span, message: message.into(), hint: None }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {sev}: {}",
            self.span.file, self.span.line, self.span.col, self.message
        )?;
        if let Some(h) = &self.hint {
            write!(f, "\n  hint: {h}")?;
        }
        Ok(())
    }
}

/// A successfully parsed value together with any warnings.
#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}
