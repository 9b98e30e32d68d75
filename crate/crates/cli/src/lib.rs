//! Experiment DSL, runner and report emitters for the `loqc` binary.

pub mod builtin;
pub mod parse;
pub mod report;
pub mod run;
pub mod spec;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use report::{Report, Table, Value};
pub use run::{render, run, run_text, CliError, Overrides, RunError};
pub use spec::{ExperimentSpec, Format};
