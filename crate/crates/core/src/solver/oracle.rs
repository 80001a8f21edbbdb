//! Classical RK4 reference solutions.
//!
//! For differentiable `x`, `x^{(α)}(t) = t^{1-α} x'(t)`, so the conformable
//! problem is the ordinary equation `x' = t^{α-1} f(t, x)`.

use crate::error::{Error, Result};
use crate::trajectory::Trajectory;
use crate::tube::{truncate, TubeCertificate};

use super::Ivp;

/// Magnitude beyond which a solution is declared to have blown up.
pub const DEFAULT_BLOW_UP: f64 = 1e12;

/// Fixed-step RK4 for `x' = t^{α-1} f(t, x)` on a uniform grid.
pub fn transform_oracle(ivp: &Ivp, grid_n: usize) -> Result<Trajectory> {
    transform_oracle_with(ivp, grid_n, DEFAULT_BLOW_UP)
}

pub fn transform_oracle_with(ivp: &Ivp, grid_n: usize, bound: f64) -> Result<Trajectory> {
    let weight = ivp.data.alpha.value() - 1.0;
    rk4(ivp, grid_n, bound, |t, x| t.powf(weight) * ivp.f.eval(t, x))
}

/// RK4 for the truncated auxiliary problem
/// `x' = t^{α-1} (f(t, x̃) + a^{-α} (x̃ - x))`.
pub fn truncated_transform_oracle(ivp: &Ivp, cert: &TubeCertificate, grid_n: usize) -> Result<Trajectory> {
    truncated_transform_oracle_with(ivp, cert, grid_n, DEFAULT_BLOW_UP)
}

pub fn truncated_transform_oracle_with(
    ivp: &Ivp,
    cert: &TubeCertificate,
    grid_n: usize,
    bound: f64,
) -> Result<Trajectory> {
    let weight = ivp.data.alpha.value() - 1.0;
    let coef = ivp.data.special_coefficient();
    rk4(ivp, grid_n, bound, |t, x| {
        let clipped = truncate(x, cert.v.at(t), cert.m.at(t));
        t.powf(weight) * (ivp.f.eval(t, clipped) + coef * (clipped - x))
    })
}

fn rk4<F>(ivp: &Ivp, grid_n: usize, bound: f64, rhs: F) -> Result<Trajectory>
where
    F: Fn(f64, f64) -> f64,
{
    let grid = ivp.data.interval.uniform_grid(grid_n)?;
    let check = |t: f64, value: f64| -> Result<f64> {
        if value.is_finite() && value.abs() <= bound {
            Ok(value)
        } else {
            Err(Error::BlowUp {
                t,
                value: value.abs(),
            })
        }
    };

    let mut values = Vec::with_capacity(grid.len());
    let mut x = check(grid[0], ivp.data.x0)?;
    values.push(x);
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let mid = t + 0.5 * h;
        let k1 = rhs(t, x);
        let k2 = rhs(mid, check(mid, x + 0.5 * h * k1)?);
        let k3 = rhs(mid, check(mid, x + 0.5 * h * k2)?);
        let k4 = rhs(w[1], check(w[1], x + h * k3)?);
        x = check(w[1], x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))?;
        values.push(x);
    }
    Trajectory::new(grid, values, ivp.data.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{FractionalOrder, Interval};
    use crate::function::ScalarFn;
    use crate::linear::IvpData;
    use crate::tube::membership;

    fn ivp(alpha: f64, a: f64, b: f64, x0: f64, f: ScalarFn) -> Ivp {
        Ivp::new(
            IvpData::new(
                FractionalOrder::new(alpha).unwrap(),
                Interval::new(a, b).unwrap(),
                x0,
            )
            .unwrap(),
            f,
        )
    }

    fn example_system(x0: f64) -> Ivp {
        ivp(
            0.5,
            1.0,
            2.0,
            x0,
            ScalarFn::of_tx(|t, x| -t.sqrt() / (1.0 + t) * x.powi(3) - x * x.exp()),
        )
    }

    #[test]
    fn zero_field_keeps_initial_state() {
        let tr = transform_oracle(&ivp(0.5, 1.0, 2.0, 3.0, ScalarFn::constant(0.0)), 11).unwrap();
        assert!(tr.values().iter().all(|&v| v == 3.0));
    }

    #[test]
    fn decaying_solution() {
        // e^{2 - 2√t} at t = 4
        let tr = transform_oracle(&ivp(0.5, 1.0, 4.0, 1.0, ScalarFn::of_tx(|_, x| -x)), 2001).unwrap();
        let last = *tr.values().last().unwrap();
        assert!((last - (-2f64).exp()).abs() < 1e-7, "{last}");
        assert!((last - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn classical_exponential_at_order_one() {
        let tr = transform_oracle(&ivp(1.0, 1.0, 2.0, 1.0, ScalarFn::of_tx(|_, x| x)), 2001).unwrap();
        for (t, x) in tr.iter() {
            assert!((x - (t - 1.0).exp()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let err =
            transform_oracle(&ivp(1.0, 1.0, 2.0, 10.0, ScalarFn::of_tx(|_, x| x * x)), 201).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }), "{err:?}");
        let err =
            transform_oracle_with(&ivp(1.0, 1.0, 2.0, 1.0, ScalarFn::of_tx(|_, x| x)), 11, 2.0).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn truncated_oracle_on_zero_solution() {
        let problem = example_system(0.0);
        let cert = TubeCertificate::constant(0.0, 1.0, problem.data.alpha, problem.data.interval).unwrap();
        let tr = truncated_transform_oracle(&problem, &cert, 201).unwrap();
        assert!(tr.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn wide_tube_means_no_truncation() {
        let problem = example_system(0.7);
        let cert = TubeCertificate::constant(0.0, 1e3, problem.data.alpha, problem.data.interval).unwrap();
        let truncated = truncated_transform_oracle(&problem, &cert, 501).unwrap();
        let plain = transform_oracle(&problem, 501).unwrap();
        assert!(truncated.sup_distance(&plain).unwrap() <= 1e-9);
    }

    #[test]
    fn truncated_oracle_stays_in_tube() {
        let problem = example_system(0.9);
        let cert = TubeCertificate::constant(0.0, 1.0, problem.data.alpha, problem.data.interval).unwrap();
        let tr = truncated_transform_oracle(&problem, &cert, 2001).unwrap();
        let (inside, max_r) = membership(&tr, &cert, 0.0);
        assert!(inside && max_r <= 0.0, "{max_r}");
    }
}
