//! The sequence language: lexer, parser, canonical printer and batch runner.

pub mod ast;
pub mod diag;
mod lexer;
mod parser;
pub mod run;

pub use ast::{Program, Span};
pub use diag::{Code, Diagnostic, Severity};
pub use parser::{parse, parse_expr};
pub use run::{check, run, run_source, sequence, RunOptions, RunOutput};

#[cfg(test)]
mod tests;
