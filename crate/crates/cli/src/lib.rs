//! Command-line front end: problem files in, trajectories and reports out.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod output;
pub mod problem;
mod run;

pub use problem::{Problem, ProblemError, ProblemKind};
pub use run::{
    execute, run, CliError, Command, Format, Options, Summary, EXIT_BLOW_UP, EXIT_FAILURE, EXIT_INVALID,
    EXIT_OK, EXIT_VERIFICATION,
};
