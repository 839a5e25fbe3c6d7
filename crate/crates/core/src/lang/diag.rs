use std::fmt;

use super::ast::Span;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

/// Diagnostic codes. `E1xx` come from the front end, `E2xx` from evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    Lex,
    Syntax,
    Unbound,
    Rebound,
    Kind,
    Directive,
    Eval,
    Undecided,
    Replay,
    PatchedDenominator,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "E101",
            Code::Syntax => "E102",
            Code::Unbound => "E103",
            Code::Rebound => "E104",
            Code::Kind => "E105",
            Code::Directive => "E106",
            Code::Eval => "E201",
            Code::Undecided => "E202",
            Code::Replay => "E203",
            Code::PatchedDenominator => "W301",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, span, message: message.into() }
    }

    pub fn warning(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, span, message: message.into() }
    }

    pub fn from_error(err: &Error, span: Span) -> Self {
        let code = match err {
            Error::OracleUndecided(_) => Code::Undecided,
            Error::CorruptJournal { .. } | Error::SeedMismatch { .. } => Code::Replay,
            _ => Code::Eval,
        };
        Diagnostic::error(code, span, err.to_string())
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: error[E102]: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {self}", self.span.line, self.span.column)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code.as_str(), self.message)
    }
}
