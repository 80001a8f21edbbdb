use std::fs;
use std::path::PathBuf;

use confract::solver::transform_oracle_with;
use confract::{
    membership, picard_solve, solve_linear_general, solve_linear_special, verify_tube, Trajectory,
};
use log::info;
use thiserror::Error;

use crate::output::{real, tube_record, witness_lines, Record, Table};
use crate::problem::{Problem, ProblemError, ProblemKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;
pub const EXIT_BLOW_UP: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Solve the problem (Picard on the tube for nonlinear kinds, closed form for linear ones)
    Solve,
    /// Check the tube certificate
    VerifyTube,
    /// Classical RK4 on the transformed equation
    Oracle,
    /// Solve and oracle side by side
    Compare,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::VerifyTube => "verify-tube",
            Command::Oracle => "oracle",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Kv,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub command: Command,
    pub problem: PathBuf,
    pub out: PathBuf,
    pub grid_n: Option<usize>,
    /// overrides the tube verification tolerance
    pub tol: Option<f64>,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Problem(#[from] ProblemError),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solver(#[from] confract::Error),

    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use confract::Error as E;
        match self {
            CliError::Problem(_) | CliError::Usage(_) => EXIT_INVALID,
            CliError::Solver(E::BlowUp { .. } | E::NonFinite { .. }) => EXIT_BLOW_UP,
            CliError::Solver(E::QuadratureNonConvergence { .. }) => EXIT_FAILURE,
            CliError::Solver(_) => EXIT_INVALID,
            CliError::Output { .. } => EXIT_FAILURE,
        }
    }
}

/// What a command reports on standard output, plus its exit code.
#[derive(Debug, Clone)]
pub struct Summary {
    pub code: u8,
    pub record: Record,
}

/// Runs a command, printing the summary to stdout and diagnostics to stderr.
pub fn run(opts: &Options) -> u8 {
    match execute(opts) {
        Ok(summary) => {
            print!("{}", summary.record.to_kv());
            summary.code
        }
        Err(e) => {
            eprintln!("confract: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(opts: &Options) -> Result<Summary, CliError> {
    let mut problem = Problem::load(&opts.problem)?;
    if let Some(n) = opts.grid_n {
        problem.solver.grid_n = n;
        problem.solver.validate()?;
    }
    if let Some(tol) = opts.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!(
                "--tol must be finite and non-negative, got {tol}"
            )));
        }
        problem.tube_tol = tol;
    }

    let mut summary = Record::default();
    summary.push("command", opts.command.name());
    let mut code = EXIT_OK;

    let document = match opts.command {
        Command::VerifyTube => {
            let cert = problem
                .tube
                .as_ref()
                .ok_or_else(|| CliError::Usage("verify-tube needs a [tube] section".into()))?;
            let report = verify_tube(cert, &problem.ivp, problem.samples_n, problem.tube_tol)?;
            let record = tube_record(&report);
            for key in ["cond_i_ok", "cond_ii_ok", "cond_iii_ok", "all_ok"] {
                summary.push(key, record.get(key).unwrap_or_default());
            }
            if !report.all_ok() {
                code = EXIT_VERIFICATION;
            }
            match opts.format {
                Format::Csv => record.to_csv_row(),
                Format::Kv => {
                    let mut record = record;
                    for w in witness_lines(&report) {
                        record.push("witness", w);
                    }
                    record.to_kv()
                }
            }
        }
        Command::Solve => {
            let traj = solve(&problem, &mut summary)?;
            trajectory_document(&traj, opts.format, &summary)
        }
        Command::Oracle => {
            let traj = transform_oracle_with(&problem.ivp, problem.solver.grid_n, problem.blow_up)?;
            membership_fields(&problem, &traj, "", &mut summary);
            trajectory_document(&traj, opts.format, &summary)
        }
        Command::Compare => {
            let solved = solve(&problem, &mut summary)?;
            let oracle = transform_oracle_with(&problem.ivp, problem.solver.grid_n, problem.blow_up)?;
            let distance = solved.sup_distance(&oracle)?;
            summary.push_real("sup_norm_distance", distance);
            membership_fields(&problem, &solved, "_solve", &mut summary);
            membership_fields(&problem, &oracle, "_oracle", &mut summary);
            let table = Table::side_by_side(&["x_solve", "x_oracle"], &[&solved, &oracle]);
            match opts.format {
                Format::Csv => table.to_csv(),
                Format::Kv => {
                    let mut record = summary.clone();
                    record.table = Some(table);
                    record.to_kv()
                }
            }
        }
    };

    fs::write(&opts.out, document).map_err(|source| CliError::Output {
        path: opts.out.display().to_string(),
        source,
    })?;
    info!("wrote {}", opts.out.display());
    Ok(Summary {
        code,
        record: summary,
    })
}

fn solve(problem: &Problem, summary: &mut Record) -> Result<Trajectory, CliError> {
    let n = problem.solver.grid_n;
    let traj = match (problem.kind, &problem.linear) {
        (ProblemKind::LinearSpecial, Some(lin)) => {
            summary.push("method", "closed-form");
            solve_linear_special(&lin.g, &lin.data, n, &problem.quadrature)?
        }
        (ProblemKind::LinearGeneral, Some(lin)) => {
            summary.push("method", "integrating-factor");
            solve_linear_general(lin, n, &problem.quadrature)?
        }
        _ => {
            let cert = problem.tube.as_ref().ok_or_else(|| {
                CliError::Usage("solving a nonlinear problem needs a [tube] section (or use `oracle`)".into())
            })?;
            let res = picard_solve(&problem.ivp, cert, &problem.solver, &problem.quadrature)?;
            summary.push("method", "picard");
            summary.push("source", format!("{:?}", res.source));
            summary.push("converged", res.converged);
            summary.push("iterations", res.iterations);
            summary.push_real("final_delta", res.final_delta);
            summary.push_real("relaxation", res.relaxation);
            res.trajectory
        }
    };
    membership_fields(problem, &traj, "", summary);
    Ok(traj)
}

fn membership_fields(problem: &Problem, traj: &Trajectory, suffix: &str, summary: &mut Record) {
    if let Some(cert) = &problem.tube {
        let (inside, max_r) = membership(traj, cert, problem.solver.membership_tol);
        summary.push(&format!("in_tube{suffix}"), inside);
        summary.push_real(&format!("max_r{suffix}"), max_r);
    }
}

fn trajectory_document(traj: &Trajectory, format: Format, summary: &Record) -> String {
    let table = Table::from_trajectory(traj);
    match format {
        Format::Csv => table.to_csv(),
        Format::Kv => {
            let mut record = summary.clone();
            record.push("alpha", real(traj.alpha().value()));
            record.push("grid_n", traj.len());
            record.table = Some(table);
            record.to_kv()
        }
    }
}
