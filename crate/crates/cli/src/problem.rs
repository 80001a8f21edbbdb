//! Problem files.
//!
//! A problem file is TOML restricted to flat tables:
//!
//! ```text
//! [problem]
//! kind = "nonlinear"          # or "linear-special", "linear-general"
//! alpha = 0.5
//! a = 1.0
//! b = 2.0
//! x0 = 0.0
//! f = "c1*sqrt(t)/(1+t)*x^3 + c2*x*exp(c*x)"
//!
//! [parameters]                # optional named constants
//! c1 = -1.0
//!
//! [tube]                      # optional certificate
//! v = "0"
//! M = "1"
//!
//! [solver]                    # optional, defaults shown in SolverSection
//! grid_n = 2001
//!
//! [quadrature]                # optional
//! method = "simpson"          # or "gauss-legendre" with points/panels
//! ```
//!
//! `f` may use `t` and `x`; `p`, `g`, `v` and `M` only `t`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use confract::tube::{DEFAULT_SAMPLES, DEFAULT_TOL};
use confract::{
    parse_expr_with, FractionalOrder, Interval, Ivp, IvpData, LinearIvp, ParseError, QuadratureConfig,
    QuadratureMethod, ScalarFn, SolverConfig, TubeCertificate, Variable,
};
use serde::Deserialize;
use thiserror::Error;

const RESERVED: &[&str] = &["t", "x", "exp", "sqrt", "sin", "cos", "abs", "pow"];

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("malformed problem file: {0}")]
    Syntax(#[from] toml::de::Error),

    #[error("expression `{field}` = \"{src}\": {source}")]
    Expr {
        field: &'static str,
        src: String,
        source: ParseError,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] confract::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Nonlinear,
    LinearSpecial,
    LinearGeneral,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    problem: ProblemSection,
    #[serde(default)]
    parameters: HashMap<String, f64>,
    tube: Option<TubeSection>,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    quadrature: QuadratureSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSection {
    kind: ProblemKind,
    alpha: f64,
    a: f64,
    b: f64,
    x0: f64,
    f: Option<String>,
    p: Option<String>,
    g: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TubeSection {
    v: String,
    #[serde(rename = "M", alias = "m")]
    m: String,
}

/// Solver and verification settings. Missing keys take library defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub grid_n: Option<usize>,
    pub picard_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub relaxation: Option<f64>,
    pub membership_tol: Option<f64>,
    /// samples for tube verification
    pub samples_n: Option<usize>,
    /// tube verification tolerance
    pub tol: Option<f64>,
    /// RK4 blow-up threshold
    pub blow_up: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureSection {
    method: Option<String>,
    points: Option<usize>,
    panels: Option<usize>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    /// the equation as `x^{(α)} = f(t, x)`; for linear kinds `f = g - p x`
    pub ivp: Ivp,
    pub linear: Option<LinearIvp>,
    pub tube: Option<TubeCertificate>,
    pub solver: SolverConfig,
    pub quadrature: QuadratureConfig,
    pub samples_n: usize,
    pub tube_tol: f64,
    pub blow_up: f64,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, ProblemError> {
        let text = fs::read_to_string(path).map_err(|source| ProblemError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let raw: RawFile = toml::from_str(text)?;
        for name in raw.parameters.keys() {
            if RESERVED.contains(&name.as_str()) {
                return Err(ProblemError::Invalid(format!(
                    "parameter name `{name}` is reserved"
                )));
            }
        }
        let consts = &raw.parameters;
        let sec = &raw.problem;

        let alpha = FractionalOrder::new(sec.alpha)?;
        let interval = Interval::new(sec.a, sec.b)?;
        let data = IvpData::new(alpha, interval, sec.x0)?;

        let (ivp, linear) = match sec.kind {
            ProblemKind::Nonlinear => {
                forbid(sec.p.as_deref(), "p", sec.kind)?;
                forbid(sec.g.as_deref(), "g", sec.kind)?;
                let f = expression(
                    "f",
                    required(sec.f.as_deref(), "f")?,
                    &[Variable::T, Variable::X],
                    consts,
                )?;
                (Ivp::new(data, f), None)
            }
            ProblemKind::LinearSpecial => {
                forbid(sec.f.as_deref(), "f", sec.kind)?;
                forbid(sec.p.as_deref(), "p", sec.kind)?;
                let g = expression("g", required(sec.g.as_deref(), "g")?, &[Variable::T], consts)?;
                let lin = LinearIvp::special(data, g)?;
                (lin.to_ivp(), Some(lin))
            }
            ProblemKind::LinearGeneral => {
                forbid(sec.f.as_deref(), "f", sec.kind)?;
                let p = expression("p", required(sec.p.as_deref(), "p")?, &[Variable::T], consts)?;
                let g = expression("g", required(sec.g.as_deref(), "g")?, &[Variable::T], consts)?;
                let lin = LinearIvp::new(data, p, g)?;
                (lin.to_ivp(), Some(lin))
            }
        };

        let tube = match &raw.tube {
            Some(t) => {
                let v = expression("v", &t.v, &[Variable::T], consts)?;
                let m = expression("M", &t.m, &[Variable::T], consts)?;
                Some(TubeCertificate::new(v, m, alpha, interval)?)
            }
            None => None,
        };

        let s = &raw.solver;
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            grid_n: s.grid_n.unwrap_or(defaults.grid_n),
            picard_tol: s.picard_tol.unwrap_or(defaults.picard_tol),
            max_iter: s.max_iter.unwrap_or(defaults.max_iter),
            relaxation: s.relaxation.unwrap_or(defaults.relaxation),
            membership_tol: s.membership_tol.unwrap_or(defaults.membership_tol),
        };
        solver.validate()?;

        let samples_n = s.samples_n.unwrap_or(DEFAULT_SAMPLES);
        let tube_tol = s.tol.unwrap_or(DEFAULT_TOL);
        let blow_up = s.blow_up.unwrap_or(confract::solver::DEFAULT_BLOW_UP);
        if samples_n < 2 {
            return Err(ProblemError::Invalid(format!(
                "samples_n must be at least 2, got {samples_n}"
            )));
        }
        if !(tube_tol >= 0.0 && tube_tol.is_finite()) {
            return Err(ProblemError::Invalid(format!(
                "tol must be finite and non-negative, got {tube_tol}"
            )));
        }
        if !(blow_up > 0.0) {
            return Err(ProblemError::Invalid(format!(
                "blow_up must be positive, got {blow_up}"
            )));
        }

        let quadrature = quadrature(&raw.quadrature)?;

        Ok(Self {
            kind: sec.kind,
            ivp,
            linear,
            tube,
            solver,
            quadrature,
            samples_n,
            tube_tol,
            blow_up,
        })
    }
}

fn required<'a>(value: Option<&'a str>, field: &str) -> Result<&'a str, ProblemError> {
    value.ok_or_else(|| ProblemError::Invalid(format!("[problem] is missing `{field}`")))
}

fn forbid(value: Option<&str>, field: &str, kind: ProblemKind) -> Result<(), ProblemError> {
    match value {
        Some(_) => Err(ProblemError::Invalid(format!(
            "`{field}` is not used by kind {kind:?}"
        ))),
        None => Ok(()),
    }
}

fn expression(
    field: &'static str,
    src: &str,
    vars: &[Variable],
    consts: &HashMap<String, f64>,
) -> Result<ScalarFn, ProblemError> {
    let tree = parse_expr_with(src, vars, consts).map_err(|source| ProblemError::Expr {
        field,
        src: src.to_string(),
        source,
    })?;
    Ok(ScalarFn::from_expr(tree))
}

fn quadrature(sec: &QuadratureSection) -> Result<QuadratureConfig, ProblemError> {
    let defaults = QuadratureConfig::default();
    let method = match sec.method.as_deref() {
        None | Some("simpson") => {
            if sec.points.is_some() || sec.panels.is_some() {
                return Err(ProblemError::Invalid(
                    "points/panels only apply to gauss-legendre".into(),
                ));
            }
            QuadratureMethod::AdaptiveSimpson
        }
        Some("gauss-legendre") => QuadratureMethod::GaussLegendre {
            points: sec.points.unwrap_or(10),
            panels: sec.panels.unwrap_or(16),
        },
        Some(other) => {
            return Err(ProblemError::Invalid(format!(
                "unknown quadrature method `{other}`"
            )))
        }
    };
    let cfg = QuadratureConfig {
        method,
        abs_tol: sec.abs_tol.unwrap_or(defaults.abs_tol),
        max_subdivisions: sec.max_subdivisions.unwrap_or(defaults.max_subdivisions),
    };
    cfg.validate()?;
    Ok(cfg)
}
