use crate::calculus::FractionalOrder;
use crate::error::{Error, Result};

/// A sampled solution: strictly increasing times and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Vec<f64>,
    values: Vec<f64>,
    alpha: FractionalOrder,
}

impl Trajectory {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, alpha: FractionalOrder) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.is_empty() {
            return Err(Error::InvalidTrajectory("empty grid".into()));
        }
        if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidTrajectory(format!(
                "grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        if let Some((t, v)) = grid.iter().zip(&values).find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidTrajectory(format!(
                "non-finite value {v} at t = {t}"
            )));
        }
        Ok(Self { grid, values, alpha })
    }

    /// Constant trajectory on `grid`.
    pub fn constant(grid: Vec<f64>, value: f64, alpha: FractionalOrder) -> Result<Self> {
        let values = vec![value; grid.len()];
        Self::new(grid, values, alpha)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Piecewise-linear value at `t`, clamped to the end values outside the grid.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.grid.len();
        if t <= self.grid[0] {
            return self.values[0];
        }
        if t >= self.grid[n - 1] {
            return self.values[n - 1];
        }
        let hi = self.grid.partition_point(|&g| g <= t);
        let lo = hi - 1;
        let w = (t - self.grid[lo]) / (self.grid[hi] - self.grid[lo]);
        self.values[lo] + w * (self.values[hi] - self.values[lo])
    }

    /// Sup-norm distance at grid points. Both trajectories must share the grid.
    pub fn sup_distance(&self, other: &Trajectory) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidTrajectory(
                "sup-norm distance needs identical grids".into(),
            ));
        }
        Ok(sup_norm_diff(&self.values, &other.values))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values, self.alpha)
    }
}

pub(crate) fn sup_norm_diff(lhs: &[f64], rhs: &[f64]) -> f64 {
    lhs.iter().zip(rhs).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}
