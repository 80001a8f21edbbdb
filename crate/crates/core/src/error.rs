use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order must lie in (0, 1], got {0}")]
    InvalidOrder(f64),

    #[error("interval must satisfy 0 < a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value while evaluating {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}] after {subdivisions} subdivisions")]
    QuadratureNonConvergence { lo: f64, hi: f64, subdivisions: usize },

    #[error("no closed-form conformable derivative for {0}")]
    UnsupportedForm(String),

    #[error("certificate and problem disagree: {0}")]
    Mismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("solution blew up at t = {t} (|x| = {value:e})")]
    BlowUp { t: f64, value: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
