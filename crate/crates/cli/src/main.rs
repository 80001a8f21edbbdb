use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use confract_cli::{run, Command, Format, Options};

/// Conformable fractional IVP solver and tube-certificate checker.
///
/// Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid input,
/// 3 a tube condition is false, 4 the solution blew up.
#[derive(Parser, Debug)]
#[command(name = "confract", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// problem file
    #[arg(long)]
    problem: PathBuf,

    /// output file
    #[arg(long)]
    out: PathBuf,

    /// number of grid points, overriding the problem file
    #[arg(long)]
    grid_n: Option<usize>,

    /// tube verification tolerance, overriding the problem file
    #[arg(long)]
    tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let opts = Options {
        command: args.command,
        problem: args.problem,
        out: args.out,
        grid_n: args.grid_n,
        tol: args.tol,
        format: args.format,
    };
    ExitCode::from(run(&opts))
}
