//! Nonlinear problems `x^{(α)} = f(t, x)`, `x(a) = x₀`.
//!
//! Given a tube certificate `(v, M)`, solutions of the truncated auxiliary
//! problem
//!
//! ```text
//! x^{(α)} + a^{-α} x = f(t, x̃) + a^{-α} x̃,   x̃ = clamp(x, v - M, v + M)
//! ```
//!
//! are fixed points of the integral operator [`apply_n`], and any such
//! solution stays inside the tube, where it solves the original problem.
//! [`picard_solve`] looks for that fixed point by damped iteration and falls
//! back to integrating the auxiliary problem with RK4 when the iteration
//! stalls.

mod oracle;

use log::{debug, warn};

use crate::calculus::QuadratureConfig;
use crate::error::{Error, Result};
use crate::function::ScalarFn;
use crate::linear::{special_scan, IvpData};
use crate::trajectory::{sup_norm_diff, Trajectory};
use crate::tube::{membership, truncate, verify_tube, TubeCertificate, DEFAULT_SAMPLES, DEFAULT_TOL};

pub use oracle::{
    transform_oracle, transform_oracle_with, truncated_transform_oracle, truncated_transform_oracle_with,
    DEFAULT_BLOW_UP,
};

/// `x^{(α)}(t) = f(t, x(t))` on `[a, b]`, `x(a) = x₀`.
#[derive(Debug, Clone)]
pub struct Ivp {
    pub data: IvpData,
    /// right-hand side `f(t, x)`
    pub f: ScalarFn,
}

impl Ivp {
    pub fn new(data: IvpData, f: ScalarFn) -> Self {
        Self { data, f }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub grid_n: usize,
    /// sup-norm threshold on `N(x) - x`
    pub picard_tol: f64,
    pub max_iter: usize,
    /// initial damping in `(0, 1]`; halved down to 1/16 when the iteration stalls
    pub relaxation: f64,
    /// tolerance for the tube membership of the delivered trajectory
    pub membership_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_n: 2001,
            picard_tol: 1e-10,
            max_iter: 200,
            relaxation: 1.0,
            membership_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid_n must be at least 2, got {}",
                self.grid_n
            )));
        }
        if !(self.picard_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "picard_tol must be positive, got {}",
                self.picard_tol
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "relaxation must lie in (0, 1], got {}",
                self.relaxation
            )));
        }
        if !(self.membership_tol >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "membership_tol must be non-negative, got {}",
                self.membership_tol
            )));
        }
        Ok(())
    }
}

/// Where a delivered trajectory came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionSource {
    Picard,
    /// RK4 on the truncated auxiliary problem after Picard did not converge.
    OracleFallback,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub trajectory: Trajectory,
    /// applications of the operator
    pub iterations: usize,
    pub converged: bool,
    /// sup-norm of `N(x) - x` at the last iterate
    pub final_delta: f64,
    pub in_tube: bool,
    /// largest `|x - v| - M` over the grid
    pub max_r: f64,
    pub source: SolutionSource,
    pub relaxation: f64,
}

const MIN_RELAXATION: f64 = 1.0 / 16.0;
const STALL_WINDOW: usize = 3;

/// Applies the fixed-point operator of the truncated auxiliary problem:
///
/// ```text
/// N(x)(t) = e^{-E(t)} (e^{1/α} x₀ + 𝔍_a^t[(f(s, x̃) + a^{-α} x̃) e^{E(s)}]),   E(t) = (t/a)^α/α
/// ```
///
/// `x` is interpolated linearly between grid points, and the result lives
/// on the grid of `x`, which must start at `a`.
pub fn apply_n(
    x: &Trajectory,
    ivp: &Ivp,
    cert: &TubeCertificate,
    cfg: &QuadratureConfig,
) -> Result<Trajectory> {
    let data = &ivp.data;
    let grid = x.grid();
    if grid[0] != data.interval.a() {
        return Err(Error::InvalidTrajectory(format!(
            "operator input must start at a = {}, starts at {}",
            data.interval.a(),
            grid[0]
        )));
    }
    let coef = data.special_coefficient();
    let xs = x.values();
    let values = special_scan(data, grid, cfg, |panel, s| {
        let (lo, hi) = (grid[panel], grid[panel + 1]);
        let w = (s - lo) / (hi - lo);
        let xs_interp = xs[panel] + w * (xs[panel + 1] - xs[panel]);
        let clipped = truncate(xs_interp, cert.v.at(s), cert.m.at(s));
        ivp.f.eval(s, clipped) + coef * clipped
    })?;
    x.with_values(values)
}

/// Damped Picard iteration `x ← (1-r) x + r N(x)` from the constant `x₀`.
///
/// Convergence means `sup |N(x) - x| ≤ picard_tol` at the returned iterate.
/// When the iteration does not converge within `max_iter`, the truncated
/// RK4 solution is returned instead, flagged by [`SolutionSource::OracleFallback`].
pub fn picard_solve(
    ivp: &Ivp,
    cert: &TubeCertificate,
    scfg: &SolverConfig,
    qcfg: &QuadratureConfig,
) -> Result<SolveResult> {
    scfg.validate()?;
    qcfg.validate()?;
    match verify_tube(cert, ivp, DEFAULT_SAMPLES, DEFAULT_TOL) {
        Ok(report) if report.all_ok() => {}
        Ok(report) => warn!(
            "certificate fails sampled verification (i: {}, ii: {}, iii: {}); existence is not guaranteed",
            report.cond_i_ok, report.cond_ii_ok, report.cond_iii_ok
        ),
        Err(e @ Error::Mismatch(_)) => return Err(e),
        Err(e) => warn!("certificate could not be verified: {e}"),
    }

    let data = &ivp.data;
    let grid = data.interval.uniform_grid(scfg.grid_n)?;
    let mut x = Trajectory::constant(grid, data.x0, data.alpha)?;
    let mut relaxation = scfg.relaxation;
    let mut previous = f64::INFINITY;
    let mut stalled = 0;
    let mut delta = f64::INFINITY;

    for iteration in 1..=scfg.max_iter {
        let image = apply_n(&x, ivp, cert, qcfg)?;
        delta = sup_norm_diff(image.values(), x.values());
        debug!("picard iteration {iteration}: delta = {delta:e}, relaxation = {relaxation}");
        if delta <= scfg.picard_tol {
            let (in_tube, max_r) = membership(&x, cert, scfg.membership_tol);
            return Ok(SolveResult {
                trajectory: x,
                iterations: iteration,
                converged: true,
                final_delta: delta,
                in_tube,
                max_r,
                source: SolutionSource::Picard,
                relaxation,
            });
        }
        if !delta.is_finite() {
            break;
        }

        if delta >= previous {
            stalled += 1;
        } else {
            stalled = 0;
        }
        if stalled >= STALL_WINDOW && relaxation > MIN_RELAXATION {
            relaxation = (0.5 * relaxation).max(MIN_RELAXATION);
            stalled = 0;
        }
        previous = delta;

        let next = if relaxation == 1.0 {
            image.values().to_vec()
        } else {
            x.values()
                .iter()
                .zip(image.values())
                .map(|(old, new)| (1.0 - relaxation) * old + relaxation * new)
                .collect()
        };
        x = x.with_values(next)?;
    }

    warn!(
        "picard iteration did not converge in {} steps (delta {delta:e}); using the truncated RK4 solution",
        scfg.max_iter
    );
    let trajectory = truncated_transform_oracle(ivp, cert, scfg.grid_n)?;
    let (in_tube, max_r) = membership(&trajectory, cert, scfg.membership_tol);
    Ok(SolveResult {
        trajectory,
        iterations: scfg.max_iter,
        converged: false,
        final_delta: delta,
        in_tube,
        max_r,
        source: SolutionSource::OracleFallback,
        relaxation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{FractionalOrder, Interval};
    use crate::linear::solve_linear_special;

    fn half() -> FractionalOrder {
        FractionalOrder::new(0.5).unwrap()
    }

    fn data(a: f64, b: f64, x0: f64) -> IvpData {
        IvpData::new(half(), Interval::new(a, b).unwrap(), x0).unwrap()
    }

    fn example_system(x0: f64) -> Ivp {
        Ivp::new(
            data(1.0, 2.0, x0),
            ScalarFn::of_tx(|t, x| -t.sqrt() / (1.0 + t) * x.powi(3) - x * x.exp()),
        )
    }

    fn unit_tube(a: f64, b: f64, radius: f64) -> TubeCertificate {
        TubeCertificate::constant(0.0, radius, half(), Interval::new(a, b).unwrap()).unwrap()
    }

    #[test]
    fn operator_fixes_zero_for_example_system() {
        let ivp = example_system(0.0);
        let zero = Trajectory::constant(
            Interval::new(1.0, 2.0).unwrap().uniform_grid(101).unwrap(),
            0.0,
            half(),
        )
        .unwrap();
        let image = apply_n(
            &zero,
            &ivp,
            &unit_tube(1.0, 2.0, 1.0),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(image.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn operator_ignores_input_when_truncated_source_vanishes() {
        // f = -a^{-α} x makes the truncated source identically zero
        let ivp = Ivp::new(data(1.0, 4.0, 1.0), ScalarFn::of_tx(|_, x| -x));
        let cert = unit_tube(1.0, 4.0, 2.0);
        let grid = Interval::new(1.0, 4.0).unwrap().uniform_grid(61).unwrap();
        let input = Trajectory::new(
            grid.clone(),
            grid.iter().map(|t| (3.0 * t).sin()).collect(),
            half(),
        )
        .unwrap();
        let image = apply_n(&input, &ivp, &cert, &QuadratureConfig::default()).unwrap();
        for (t, x) in image.iter() {
            assert!((x - (2.0 - 2.0 * t.sqrt()).exp()).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn exact_linear_solution_is_a_fixed_point() {
        let d = data(1.0, 2.0, 0.3);
        let g = ScalarFn::of_t(|t| t.cos());
        let exact = solve_linear_special(&g, &d, 2001, &QuadratureConfig::default()).unwrap();
        let ivp = Ivp::new(d, ScalarFn::of_tx(|t, x| t.cos() - x));
        let image = apply_n(
            &exact,
            &ivp,
            &unit_tube(1.0, 2.0, 100.0),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(image.sup_distance(&exact).unwrap() < 1e-8);
    }

    #[test]
    fn operator_rejects_grid_not_starting_at_a() {
        let ivp = example_system(0.0);
        let tr = Trajectory::constant(vec![1.5, 2.0], 0.0, half()).unwrap();
        assert!(apply_n(&tr, &ivp, &unit_tube(1.0, 2.0, 1.0), &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn picard_on_zero_solution() {
        let ivp = example_system(0.0);
        let result = picard_solve(
            &ivp,
            &unit_tube(1.0, 2.0, 1.0),
            &SolverConfig::default(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(result.converged);
        assert!(result.iterations <= 2);
        assert_eq!(result.trajectory.sup_norm(), 0.0);
        assert_eq!(result.source, SolutionSource::Picard);
        assert!(result.in_tube);
    }

    #[test]
    fn picard_matches_closed_form_linear() {
        let d = data(1.0, 2.0, 0.0);
        let ivp = Ivp::new(d, ScalarFn::of_tx(|_, x| 1.0 - x));
        let result = picard_solve(
            &ivp,
            &unit_tube(1.0, 2.0, 10.0),
            &SolverConfig::default(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(result.converged);
        let exact =
            solve_linear_special(&ScalarFn::constant(1.0), &d, 2001, &QuadratureConfig::default()).unwrap();
        assert!(result.trajectory.sup_distance(&exact).unwrap() < 1e-6);
    }

    #[test]
    fn picard_perturbed_example_matches_oracle() {
        let ivp = example_system(0.5);
        let cert = unit_tube(1.0, 2.0, 1.0);
        let result = picard_solve(
            &ivp,
            &cert,
            &SolverConfig::default(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(result.converged);
        assert!(result.in_tube);
        let oracle = transform_oracle(&ivp, 2001).unwrap();
        assert!(result.trajectory.sup_distance(&oracle).unwrap() <= 1e-4);
    }

    #[test]
    fn converged_iterate_is_a_fixed_point() {
        let ivp = example_system(0.9);
        let cert = unit_tube(1.0, 2.0, 1.0);
        let scfg = SolverConfig {
            grid_n: 401,
            picard_tol: 1e-9,
            ..SolverConfig::default()
        };
        let qcfg = QuadratureConfig::default();
        let result = picard_solve(&ivp, &cert, &scfg, &qcfg).unwrap();
        assert!(result.converged);
        assert!(result.final_delta <= scfg.picard_tol);
        let image = apply_n(&result.trajectory, &ivp, &cert, &qcfg).unwrap();
        assert!(image.sup_distance(&result.trajectory).unwrap() <= 2.0 * scfg.picard_tol);
    }

    #[test]
    fn non_convergence_falls_back_to_oracle() {
        let ivp = example_system(0.5);
        let cert = unit_tube(1.0, 2.0, 1.0);
        let scfg = SolverConfig {
            grid_n: 201,
            max_iter: 1,
            ..SolverConfig::default()
        };
        let result = picard_solve(&ivp, &cert, &scfg, &QuadratureConfig::default()).unwrap();
        assert!(!result.converged);
        assert_eq!(result.source, SolutionSource::OracleFallback);
        assert!(result.in_tube);
        let oracle = truncated_transform_oracle(&ivp, &cert, 201).unwrap();
        assert_eq!(result.trajectory, oracle);
    }

    #[test]
    fn solver_config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for bad in [
            SolverConfig {
                grid_n: 1,
                ..SolverConfig::default()
            },
            SolverConfig {
                picard_tol: 0.0,
                ..SolverConfig::default()
            },
            SolverConfig {
                max_iter: 0,
                ..SolverConfig::default()
            },
            SolverConfig {
                relaxation: 0.0,
                ..SolverConfig::default()
            },
            SolverConfig {
                relaxation: 1.5,
                ..SolverConfig::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn picard_rejects_mismatched_certificate() {
        let ivp = example_system(0.0);
        let cert = unit_tube(1.0, 3.0, 1.0);
        assert!(matches!(
            picard_solve(
                &ivp,
                &cert,
                &SolverConfig::default(),
                &QuadratureConfig::default()
            ),
            Err(Error::Mismatch(_))
        ));
    }
}
