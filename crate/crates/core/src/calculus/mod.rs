//! Conformable differentiation and integration.
//!
//! For `t > 0` the conformable derivative of order `α` is
//! `T_α(f)(t) = lim_{ε→0} (f(t + ε t^{1-α}) - f(t)) / ε`, which equals
//! `t^{1-α} f'(t)` when `f` is differentiable. The matching integral is
//! `I_α^a(f)(t) = ∫_a^t f(τ) τ^{α-1} dτ`.

pub mod quadrature;

use crate::error::{Error, Result};
use crate::function::{ClosedForm, ScalarFn};

pub use quadrature::{integrate, integrate_to, QuadratureConfig, QuadratureMethod};

/// Order of differentiation, `0 < α ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Time interval `[a, b]` with `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && a < b && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    /// `n ≥ 2` equally spaced points, first `a` and last `b` exactly.
    pub fn uniform_grid(&self, n: usize) -> Result<Vec<f64>> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "a grid needs at least 2 points, got {n}"
            )));
        }
        let steps = (n - 1) as f64;
        let mut grid: Vec<f64> = (0..n).map(|i| self.a + self.len() * (i as f64 / steps)).collect();
        grid[n - 1] = self.b;
        Ok(grid)
    }
}

/// Finite-difference stencil for [`conf_deriv_numeric_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffMode {
    /// Central difference, second order before extrapolation.
    #[default]
    Symmetric,
    /// The one-sided quotient of the definition; for points where the
    /// function cannot be evaluated to the left.
    Forward,
}

/// Default step: `max(1e-6, 1e-8 t^α)`.
pub fn default_eps(t: f64, alpha: FractionalOrder) -> f64 {
    (1e-8 * t.powf(alpha.value())).max(1e-6)
}

/// Finite-difference estimate of `T_α(f)(t)`: symmetric quotient at steps
/// `eps` and `eps/2` combined by one Richardson step. Falls back to the
/// forward stencil when `t - eps t^{1-α}` would leave `(0, ∞)`.
pub fn conf_deriv_numeric(f: &ScalarFn, t: f64, alpha: FractionalOrder, eps: f64) -> Result<f64> {
    conf_deriv_numeric_with(f, t, alpha, eps, DiffMode::Symmetric)
}

pub fn conf_deriv_numeric_with(
    f: &ScalarFn,
    t: f64,
    alpha: FractionalOrder,
    eps: f64,
    mode: DiffMode,
) -> Result<f64> {
    numeric_derivative(|s| f.at(s), t, alpha, eps, mode)
}

pub(crate) fn numeric_derivative<F>(
    f: F,
    t: f64,
    alpha: FractionalOrder,
    eps: f64,
    mode: DiffMode,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "conformable derivative needs t > 0, got {t}"
        )));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {eps}")));
    }
    let scale = t.powf(1.0 - alpha.value());
    let mode = if mode == DiffMode::Symmetric && t - eps * scale <= 0.0 {
        DiffMode::Forward
    } else {
        mode
    };
    let eval = |s: f64| -> Result<f64> {
        let v = f(s);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                what: "function on difference stencil",
                t: s,
            })
        }
    };
    let value = match mode {
        DiffMode::Symmetric => {
            let quotient =
                |h: f64| -> Result<f64> { Ok((eval(t + h * scale)? - eval(t - h * scale)?) / (2.0 * h)) };
            let coarse = quotient(eps)?;
            let fine = quotient(0.5 * eps)?;
            (4.0 * fine - coarse) / 3.0
        }
        DiffMode::Forward => {
            let f_t = eval(t)?;
            let quotient = |h: f64| -> Result<f64> { Ok((eval(t + h * scale)? - f_t) / h) };
            let coarse = quotient(eps)?;
            let fine = quotient(0.5 * eps)?;
            2.0 * fine - coarse
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            what: "difference quotient",
            t,
        })
    }
}

/// Exact conformable derivative of a closed-form function.
pub fn conf_deriv_closed(form: &ScalarFn, t: f64, alpha: FractionalOrder) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "conformable derivative needs t > 0, got {t}"
        )));
    }
    let Some(closed) = form.as_closed() else {
        return Err(Error::UnsupportedForm(format!("{form:?}")));
    };
    Ok(closed_derivative(closed, t, alpha))
}

fn closed_derivative(form: &ClosedForm, t: f64, alpha: FractionalOrder) -> f64 {
    let alpha = alpha.value();
    match *form {
        ClosedForm::Power(p) => {
            if p == 0.0 {
                0.0
            } else {
                p * t.powf(p - alpha)
            }
        }
        ClosedForm::Constant(_) => 0.0,
        ClosedForm::Exponential(c) => c * t.powf(1.0 - alpha) * (c * t).exp(),
        // T_α e^{t^β/β} = t^{β-α} e^{t^β/β}; the eigenfunction when β = α
        ClosedForm::AlphaExponential(beta) => {
            let value = (t.powf(beta) / beta).exp();
            if beta == alpha {
                value
            } else {
                t.powf(beta - alpha) * value
            }
        }
    }
}

/// `T_α(f)(t)`, exact for closed forms and numeric otherwise.
pub fn conf_deriv(f: &ScalarFn, t: f64, alpha: FractionalOrder) -> Result<f64> {
    match f.as_closed() {
        Some(_) => conf_deriv_closed(f, t, alpha),
        None => conf_deriv_numeric(f, t, alpha, default_eps(t, alpha)),
    }
}

/// `I_α^a(f)(t) = ∫_a^t f(τ) τ^{α-1} dτ` for `0 < a ≤ t`.
pub fn conf_integral(
    f: &ScalarFn,
    a: f64,
    t: f64,
    alpha: FractionalOrder,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(a > 0.0) || !(t >= a) {
        return Err(Error::Domain(format!(
            "conformable integral needs 0 < a <= t, got a = {a}, t = {t}"
        )));
    }
    if t == a {
        return Ok(0.0);
    }
    cfg.validate()?;
    let weight = alpha.value() - 1.0;
    integrate(|tau| f.at(tau) * tau.powf(weight), a, t, cfg)
}

/// `|x|^{(α)}(t) = x(t) x^{(α)}(t) / |x(t)|`, defined where `x(t) ≠ 0`.
pub fn modulus_deriv(x_val: f64, x_deriv_val: f64) -> Result<f64> {
    if x_val == 0.0 || !x_val.is_finite() {
        return Err(Error::Domain(format!(
            "derivative of |x| needs a finite nonzero x, got {x_val}"
        )));
    }
    Ok(x_val * x_deriv_val / x_val.abs())
}
