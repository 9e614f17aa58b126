//! Command-line front end: expression grammar, evaluation and command
//! dispatch over `fresco-core`.

pub mod commands;
pub mod eval;
pub mod parser;

pub use commands::{execute, CliError, Command, CommandRequest, Format, Options, Outcome};
pub use eval::{evaluate, EvalOptions, Value};
pub use parser::{parse_expression, OperatorExpr, ParseError};
