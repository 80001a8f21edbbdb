//! One-dimensional quadrature: adaptive Simpson and composite Gauss–Legendre.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureMethod {
    /// Adaptive Simpson with local Richardson correction.
    AdaptiveSimpson,
    /// A fixed `points`-node Gauss–Legendre rule on `panels` equal panels.
    /// `abs_tol` is not consulted.
    GaussLegendre { points: usize, panels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::AdaptiveSimpson,
            abs_tol: 1e-10,
            max_subdivisions: 1 << 20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "quadrature abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidConfig(
                "quadrature max_subdivisions must be at least 1".into(),
            ));
        }
        if let QuadratureMethod::GaussLegendre { points, panels } = self.method {
            if !(1..=64).contains(&points) || panels < 1 {
                return Err(Error::InvalidConfig(format!(
                    "Gauss-Legendre rule needs 1..=64 points and at least one panel, got {points} points, {panels} panels"
                )));
            }
        }
        Ok(())
    }
}

/// Integrates `f` over `[lo, hi]` to `cfg.abs_tol`. Reversed bounds flip the sign.
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_to(f, lo, hi, cfg, cfg.abs_tol)
}

/// Like [`integrate`] with an explicit absolute tolerance, used when a
/// tolerance budget is split across panels.
pub fn integrate_to<F>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if lo == hi {
        return Ok(0.0);
    }
    if hi < lo {
        return integrate_to(f, hi, lo, cfg, tol).map(|v| -v);
    }
    let value = match cfg.method {
        QuadratureMethod::AdaptiveSimpson => adaptive_simpson(&f, lo, hi, tol, cfg.max_subdivisions)?,
        QuadratureMethod::GaussLegendre { points, panels } => gauss_legendre(&f, lo, hi, points, panels),
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            what: "integrand",
            t: lo,
        })
    }
}

struct Segment {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_mid: f64,
    f_hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

const MAX_DEPTH: u32 = 60;

fn adaptive_simpson<F>(f: &F, lo: f64, hi: f64, tol: f64, max_subdivisions: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mid = 0.5 * (lo + hi);
    let (f_lo, f_mid, f_hi) = (f(lo), f(mid), f(hi));
    let mut stack = vec![Segment {
        lo,
        hi,
        f_lo,
        f_mid,
        f_hi,
        whole: simpson(lo, hi, f_lo, f_mid, f_hi),
        tol,
        depth: 0,
    }];
    let mut total = 0.0;
    let mut subdivisions = 0usize;

    while let Some(seg) = stack.pop() {
        let mid = 0.5 * (seg.lo + seg.hi);
        let left_mid = 0.5 * (seg.lo + mid);
        let right_mid = 0.5 * (mid + seg.hi);
        let f_lm = f(left_mid);
        let f_rm = f(right_mid);
        let left = simpson(seg.lo, mid, seg.f_lo, f_lm, seg.f_mid);
        let right = simpson(mid, seg.hi, seg.f_mid, f_rm, seg.f_hi);
        let refined = left + right;
        let diff = refined - seg.whole;

        if !diff.is_finite() {
            return Err(Error::NonFinite {
                what: "integrand",
                t: seg.lo,
            });
        }
        // rounding floor: a tolerance below a few ulps of the panel value is unattainable
        let floor = 4.0 * f64::EPSILON * (left.abs() + right.abs());
        if diff.abs() <= 15.0 * seg.tol.max(floor) || seg.depth >= MAX_DEPTH {
            total += refined + diff / 15.0;
            continue;
        }

        subdivisions += 1;
        if subdivisions > max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                lo,
                hi,
                subdivisions: max_subdivisions,
            });
        }
        let half_tol = 0.5 * seg.tol;
        stack.push(Segment {
            lo: mid,
            hi: seg.hi,
            f_lo: seg.f_mid,
            f_mid: f_rm,
            f_hi: seg.f_hi,
            whole: right,
            tol: half_tol,
            depth: seg.depth + 1,
        });
        stack.push(Segment {
            lo: seg.lo,
            hi: mid,
            f_lo: seg.f_lo,
            f_mid: f_lm,
            f_hi: seg.f_mid,
            whole: left,
            tol: half_tol,
            depth: seg.depth + 1,
        });
    }
    Ok(total)
}

#[inline]
fn simpson(lo: f64, hi: f64, f_lo: f64, f_mid: f64, f_hi: f64) -> f64 {
    (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
}

fn gauss_legendre<F>(f: &F, lo: f64, hi: f64, points: usize, panels: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let (nodes, weights) = legendre_nodes(points);
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let p_lo = lo + width * k as f64;
        let center = p_lo + 0.5 * width;
        let half = 0.5 * width;
        let panel: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&z, &w)| w * f(center + half * z))
            .sum();
        total += half * panel;
    }
    total
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}
