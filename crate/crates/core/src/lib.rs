//! Conformable fractional calculus on `[a, b]` with `a > 0`.
//!
//! * [`calculus`]: conformable derivatives (closed form and finite
//!   differences) and the weighted integral `I_α^a`.
//! * [`linear`]: integrating-factor solvers for `x^{(α)} + p x = g`.
//! * [`tube`]: tube-solution certificates `(v, M)` and their sampled verification.
//! * [`solver`]: the truncated fixed-point operator, Picard iteration and RK4
//!   reference solutions for `x^{(α)} = f(t, x)`.
//! * [`expr`]: the expression language used to describe problems in files.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod expr;
pub mod function;
pub mod linear;
pub mod solver;
pub mod trajectory;
pub mod tube;

pub use calculus::{
    conf_deriv, conf_deriv_closed, conf_deriv_numeric, conf_deriv_numeric_with, conf_integral, default_eps,
    modulus_deriv, DiffMode, FractionalOrder, Interval, QuadratureConfig, QuadratureMethod,
};
pub use error::{Error, Result};
pub use expr::{parse_expr, parse_expr_with, Expr, ParseError, Variable};
pub use function::{Arity, ClosedForm, ScalarFn};
pub use linear::{
    integrating_factor, linear_residual, solve_linear_general, solve_linear_special, IvpData, LinearIvp,
};
pub use solver::{
    apply_n, picard_solve, transform_oracle, truncated_transform_oracle, Ivp, SolutionSource, SolveResult,
    SolverConfig,
};
pub use trajectory::Trajectory;
pub use tube::{membership, truncate, verify_tube, Condition, TubeCertificate, TubeReport, Witness};
