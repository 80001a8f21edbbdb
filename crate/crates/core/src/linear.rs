//! Linear conformable problems `x^{(α)} + p(t) x = g(t)`, `x(a) = x₀`.
//!
//! Both solvers evaluate the integrating-factor representation
//! `x(t) = (x₀ μ(a) + I_α^a(μ g)(t)) / μ(t)` with `μ = exp(I_α^a(p))`,
//! accumulating the inner integral panel by panel along the grid. The
//! factor is applied as a ratio `μ(s)/μ(t)`, so no intermediate quantity
//! grows like `μ` itself.

use std::cell::Cell;

use crate::calculus::{conf_integral, integrate_to, FractionalOrder, Interval, QuadratureConfig};
use crate::error::{Error, Result};
use crate::function::{Arity, ScalarFn};
use crate::solver::Ivp;
use crate::trajectory::Trajectory;

/// Order, horizon and initial state shared by every problem type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpData {
    pub alpha: FractionalOrder,
    pub interval: Interval,
    pub x0: f64,
}

impl IvpData {
    pub fn new(alpha: FractionalOrder, interval: Interval, x0: f64) -> Result<Self> {
        if !x0.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "initial state must be finite, got {x0}"
            )));
        }
        Ok(Self { alpha, interval, x0 })
    }

    /// `(t/a)^α / α`; the special integrating factor is `exp` of this up to a constant.
    pub(crate) fn special_exponent(&self, t: f64) -> f64 {
        let alpha = self.alpha.value();
        (t / self.interval.a()).powf(alpha) / alpha
    }

    /// `a^{-α}`, the coefficient of the special linear problem.
    pub fn special_coefficient(&self) -> f64 {
        self.interval.a().powf(-self.alpha.value())
    }
}

#[derive(Debug, Clone)]
pub struct LinearIvp {
    pub data: IvpData,
    /// coefficient `p(t)`
    pub p: ScalarFn,
    /// forcing `g(t)`
    pub g: ScalarFn,
}

impl LinearIvp {
    pub fn new(data: IvpData, p: ScalarFn, g: ScalarFn) -> Result<Self> {
        for (name, f) in [("p", &p), ("g", &g)] {
            if f.arity() != Arity::One {
                return Err(Error::InvalidConfig(format!(
                    "`{name}` of a linear problem must depend on t only"
                )));
            }
        }
        Ok(Self { data, p, g })
    }

    /// The problem with `p ≡ a^{-α}`, which has the closed-form solution of
    /// [`solve_linear_special`].
    pub fn special(data: IvpData, g: ScalarFn) -> Result<Self> {
        Self::new(data, ScalarFn::constant(data.special_coefficient()), g)
    }

    /// The same problem as a general initial value problem with
    /// `f(t, x) = g(t) - p(t) x`.
    pub fn to_ivp(&self) -> Ivp {
        let (p, g) = (self.p.clone(), self.g.clone());
        Ivp {
            data: self.data,
            f: ScalarFn::of_tx(move |t, x| g.at(t) - p.at(t) * x),
        }
    }
}

/// `μ(t) = exp(I_α^a(p)(t))`; exactly `1` at `t = a`.
pub fn integrating_factor(
    p: &ScalarFn,
    a: f64,
    alpha: FractionalOrder,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if t == a {
        return Ok(1.0);
    }
    Ok(conf_integral(p, a, t, alpha, cfg)?.exp())
}

pub(crate) fn panel_tol(cfg: &QuadratureConfig, interval: &Interval, lo: f64, hi: f64) -> f64 {
    cfg.abs_tol * (hi - lo) / interval.len()
}

/// Closed-form solution of `x^{(α)} + a^{-α} x = g`, `x(a) = x₀` on a
/// uniform grid of `grid_n` points.
pub fn solve_linear_special(
    g: &ScalarFn,
    data: &IvpData,
    grid_n: usize,
    cfg: &QuadratureConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = data.interval.uniform_grid(grid_n)?;
    let values = special_scan(data, &grid, cfg, |_, s| g.at(s))?;
    Trajectory::new(grid, values, data.alpha)
}

/// Evaluates `e^{-E(t)} (e^{1/α} x₀ + 𝔍_a^t[h(s) e^{E(s)}])` at every grid
/// point, with `E(t) = (t/a)^α / α` and `h = source(panel, s)` on each panel.
/// The first value is `x₀` exactly.
pub(crate) fn special_scan<F>(
    data: &IvpData,
    grid: &[f64],
    cfg: &QuadratureConfig,
    source: F,
) -> Result<Vec<f64>>
where
    F: Fn(usize, f64) -> f64,
{
    let weight = data.alpha.value() - 1.0;
    let inv_alpha = 1.0 / data.alpha.value();
    let mut values = Vec::with_capacity(grid.len());
    values.push(data.x0);
    // scaled = e^{-E(t)} 𝔍_a^t[h e^{E}]
    let mut scaled = 0.0;
    for (panel, w) in grid.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let e_hi = data.special_exponent(hi);
        let contribution = integrate_to(
            |s| source(panel, s) * (data.special_exponent(s) - e_hi).exp() * s.powf(weight),
            lo,
            hi,
            cfg,
            panel_tol(cfg, &data.interval, lo, hi),
        )?;
        scaled = scaled * (data.special_exponent(lo) - e_hi).exp() + contribution;
        values.push(data.x0 * (inv_alpha - e_hi).exp() + scaled);
    }
    Ok(values)
}

/// Integrating-factor solution of a general linear problem on a uniform grid.
pub fn solve_linear_general(ivp: &LinearIvp, grid_n: usize, cfg: &QuadratureConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let data = &ivp.data;
    let grid = data.interval.uniform_grid(grid_n)?;
    let weight = data.alpha.value() - 1.0;
    let p_weighted = |tau: f64| ivp.p.at(tau) * tau.powf(weight);

    let mut values = Vec::with_capacity(grid.len());
    values.push(data.x0);
    // log_mu = I_α^a(p)(t_i); scaled = I_α^a(μ g)(t_i) / μ(t_i)
    let mut log_mu = 0.0;
    let mut scaled = 0.0;
    for w in grid.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let tol = panel_tol(cfg, &data.interval, lo, hi);
        let step = integrate_to(p_weighted, lo, hi, cfg, tol)?;
        let inner_err = Cell::new(None);
        let panel = integrate_to(
            |s| {
                // log(μ(s)/μ(hi)) = -∫_s^hi p τ^{α-1} dτ
                let log_ratio = match integrate_to(p_weighted, s, hi, cfg, tol) {
                    Ok(v) => -v,
                    Err(e) => {
                        inner_err.set(Some(e));
                        f64::NAN
                    }
                };
                ivp.g.at(s) * log_ratio.exp() * s.powf(weight)
            },
            lo,
            hi,
            cfg,
            tol,
        );
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        let panel = panel?;
        log_mu += step;
        scaled = scaled * (-step).exp() + panel;
        values.push(data.x0 * (-log_mu).exp() + scaled);
    }
    Trajectory::new(grid, values, data.alpha)
}

/// Largest residual `|x^{(α)} + p x - g|` over interior grid points, with
/// `x^{(α)} = t^{1-α} x'` and `x'` from the three-point difference formula.
pub fn linear_residual(traj: &Trajectory, ivp: &LinearIvp) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::InvalidTrajectory("empty trajectory".into()));
    }
    let alpha = ivp.data.alpha.value();
    let (t, x) = (traj.grid(), traj.values());
    let mut worst: f64 = 0.0;
    for i in 1..t.len().saturating_sub(1) {
        let h1 = t[i] - t[i - 1];
        let h2 = t[i + 1] - t[i];
        let slope = -h2 / (h1 * (h1 + h2)) * x[i - 1]
            + (h2 - h1) / (h1 * h2) * x[i]
            + h1 / (h2 * (h1 + h2)) * x[i + 1];
        let deriv = t[i].powf(1.0 - alpha) * slope;
        let r = (deriv + ivp.p.at(t[i]) * x[i] - ivp.g.at(t[i])).abs();
        if !r.is_finite() {
            return Err(Error::NonFinite {
                what: "linear residual",
                t: t[i],
            });
        }
        worst = worst.max(r);
    }
    Ok(worst)
}
