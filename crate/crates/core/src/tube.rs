//! Tube-solution certificates.
//!
//! A pair `(v, M)` with `M ≥ 0` is a tube solution of
//! `x^{(α)} = f(t, x)`, `x(a) = x₀` when
//!
//! 1. `(y - v(t)) (f(t, y) - v^{(α)}(t)) ≤ M(t) M^{(α)}(t)` whenever `|y - v(t)| = M(t)`,
//! 2. `v^{(α)}(t) = f(t, v(t))` and `M^{(α)}(t) = 0` wherever `M(t) = 0`,
//! 3. `|x₀ - v(a)| ≤ M(a)`.
//!
//! A valid certificate guarantees a solution with `|x(t) - v(t)| ≤ M(t)` on
//! `[a, b]`. [`verify_tube`] checks the conditions on a sample grid only; it
//! is evidence, not proof, and the report says so.

use std::fmt;

use crate::calculus::{conf_deriv, FractionalOrder, Interval};
use crate::error::{Error, Result};
use crate::function::{Arity, ScalarFn};
use crate::solver::Ivp;
use crate::trajectory::Trajectory;

pub const DEFAULT_SAMPLES: usize = 1001;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Witnesses kept per report; the worst margins are always exact.
const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone)]
pub struct TubeCertificate {
    /// tube center
    pub v: ScalarFn,
    /// tube radius
    pub m: ScalarFn,
    pub alpha: FractionalOrder,
    pub interval: Interval,
}

impl TubeCertificate {
    pub fn new(v: ScalarFn, m: ScalarFn, alpha: FractionalOrder, interval: Interval) -> Result<Self> {
        if v.arity() != Arity::One || m.arity() != Arity::One {
            return Err(Error::InvalidConfig(
                "tube center and radius must depend on t only".into(),
            ));
        }
        Ok(Self {
            v,
            m,
            alpha,
            interval,
        })
    }

    /// Constant tube `(v, M) ≡ (center, radius)`.
    pub fn constant(center: f64, radius: f64, alpha: FractionalOrder, interval: Interval) -> Result<Self> {
        Self::new(
            ScalarFn::constant(center),
            ScalarFn::constant(radius),
            alpha,
            interval,
        )
    }

    fn check_matches(&self, ivp: &Ivp) -> Result<()> {
        if self.alpha != ivp.data.alpha {
            return Err(Error::Mismatch(format!(
                "certificate order {} vs problem order {}",
                self.alpha.value(),
                ivp.data.alpha.value()
            )));
        }
        if self.interval != ivp.data.interval {
            return Err(Error::Mismatch(format!(
                "certificate interval [{}, {}] vs problem interval [{}, {}]",
                self.interval.a(),
                self.interval.b(),
                ivp.data.interval.a(),
                ivp.data.interval.b()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Boundary,
    ZeroRadius,
    Initial,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Boundary => "i",
            Condition::ZeroRadius => "ii",
            Condition::Initial => "iii",
        })
    }
}

/// A sample point where a condition fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub condition: Condition,
    pub t: f64,
    pub y: f64,
    pub margin: f64,
}

/// Outcome of a sampled certificate check. Each `cond_*_ok` holds exactly
/// when the matching worst margin is at most `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeReport {
    pub cond_i_ok: bool,
    pub cond_ii_ok: bool,
    pub cond_iii_ok: bool,
    /// max of `(y - v)(f(t, y) - v^{(α)}) - M M^{(α)}` over samples and both boundary points
    pub worst_margin_i: f64,
    /// max of `|v^{(α)} - f(t, v)|` and `|M^{(α)}|` over samples with `M ≤ tol`; 0 if there are none
    pub worst_margin_ii: f64,
    /// `|x₀ - v(a)| - M(a)`
    pub worst_margin_iii: f64,
    pub zero_radius_samples: usize,
    pub samples_n: usize,
    pub tol: f64,
    pub witnesses: Vec<Witness>,
}

impl TubeReport {
    pub fn all_ok(&self) -> bool {
        self.cond_i_ok && self.cond_ii_ok && self.cond_iii_ok
    }

    pub fn verification_kind(&self) -> &'static str {
        "sampled"
    }
}

struct Collector {
    witnesses: Vec<Witness>,
    tol: f64,
}

impl Collector {
    fn record(&mut self, condition: Condition, t: f64, y: f64, margin: f64) {
        if margin > self.tol && self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                condition,
                t,
                y,
                margin,
            });
        }
    }
}

/// Checks the three tube conditions at `samples_n` uniformly spaced times.
pub fn verify_tube(cert: &TubeCertificate, ivp: &Ivp, samples_n: usize, tol: f64) -> Result<TubeReport> {
    cert.check_matches(ivp)?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let alpha = cert.alpha;
    let grid = cert.interval.uniform_grid(samples_n)?;
    let mut collector = Collector {
        witnesses: Vec::new(),
        tol,
    };
    let mut worst_i = f64::NEG_INFINITY;
    let mut worst_ii: f64 = 0.0;
    let mut zero_radius_samples = 0;

    for &t in &grid {
        let v = cert.v.at(t);
        let m = cert.m.at(t);
        if !v.is_finite() || !m.is_finite() {
            return Err(Error::NonFinite {
                what: "tube center or radius",
                t,
            });
        }
        if m < 0.0 {
            return Err(Error::Domain(format!("tube radius is negative at t = {t}: {m}")));
        }
        let dv = conf_deriv(&cert.v, t, alpha)?;
        let dm = conf_deriv(&cert.m, t, alpha)?;

        for y in [v + m, v - m] {
            let fy = ivp.f.eval(t, y);
            let margin = (y - v) * (fy - dv) - m * dm;
            if !margin.is_finite() {
                return Err(Error::NonFinite {
                    what: "boundary condition",
                    t,
                });
            }
            worst_i = worst_i.max(margin);
            collector.record(Condition::Boundary, t, y, margin);
        }

        if m <= tol {
            zero_radius_samples += 1;
            let defect = (dv - ivp.f.eval(t, v)).abs().max(dm.abs());
            let defect = if defect.is_nan() { f64::INFINITY } else { defect };
            worst_ii = worst_ii.max(defect);
            collector.record(Condition::ZeroRadius, t, v, defect);
        }
    }

    let a = cert.interval.a();
    let worst_iii = (ivp.data.x0 - cert.v.at(a)).abs() - cert.m.at(a);
    collector.record(Condition::Initial, a, ivp.data.x0, worst_iii);

    Ok(TubeReport {
        cond_i_ok: worst_i <= tol,
        cond_ii_ok: worst_ii <= tol,
        cond_iii_ok: worst_iii <= tol,
        worst_margin_i: worst_i,
        worst_margin_ii: worst_ii,
        worst_margin_iii: worst_iii,
        zero_radius_samples,
        samples_n,
        tol,
        witnesses: collector.witnesses,
    })
}

/// Projection of `x` onto `[v - M, v + M]`.
///
/// Equal to `M (x - v)/|x - v| + v` when `|x - v| > M` and to `x` otherwise;
/// the bounds are compared directly so the result is exactly the clamp.
#[inline]
pub fn truncate(x_val: f64, v_val: f64, m_val: f64) -> f64 {
    let lo = v_val - m_val;
    let hi = v_val + m_val;
    if x_val > hi {
        hi
    } else if x_val < lo {
        lo
    } else {
        x_val
    }
}

/// Returns `(max r ≤ tol, max r)` for `r(t) = |x(t) - v(t)| - M(t)` over the grid.
pub fn membership(traj: &Trajectory, cert: &TubeCertificate, tol: f64) -> (bool, f64) {
    let max_r = traj
        .iter()
        .map(|(t, x)| (x - cert.v.at(t)).abs() - cert.m.at(t))
        .fold(f64::NEG_INFINITY, f64::max);
    (max_r <= tol, max_r)
}
