use crate::{Error, Result};

/// Finite set of admissible resource limits, strictly increasing in `(0, τ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    points: Vec<f64>,
    tau_max: f64,
}

impl ResourceGrid {
    /// Equidistant grid `{j · τ / m : j = 1..m}`; the last point is exactly `τ`.
    pub fn equidistant(m: usize, tau_max: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("grid size must be at least 1"));
        }
        if !(tau_max.is_finite() && tau_max > 0.0) {
            return Err(Error::domain(format!("tau_max must be finite and > 0, got {tau_max}")));
        }
        let mut points: Vec<f64> = (1..=m).map(|j| tau_max * j as f64 / m as f64).collect();
        points[m - 1] = tau_max;
        Ok(Self { points, tau_max })
    }

    /// Grid from explicit points, validated against the invariants.
    pub fn from_points(points: Vec<f64>, tau_max: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid must contain at least one point"));
        }
        if points.iter().any(|&p| !(p > 0.0 && p <= tau_max)) {
            return Err(Error::domain(format!("grid points must lie in (0, {tau_max}]")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        Ok(Self { points, tau_max })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Index of the largest grid point.
    pub fn max_index(&self) -> usize {
        self.points.len() - 1
    }

    pub fn point(&self, index: usize) -> f64 {
        self.points[index]
    }

    /// Index of the grid point equal to `value` (up to 1e-12 relative error).
    pub fn index_of(&self, value: f64) -> Result<usize> {
        let tol = 1e-12 * self.tau_max;
        self.points
            .iter()
            .position(|&p| (p - value).abs() <= tol)
            .ok_or_else(|| Error::domain(format!("{value} is not a grid point")))
    }
}

/// Equidistant grid of `m` points on `(0, tau_max]`.
pub fn build_grid(m: usize, tau_max: f64) -> Result<ResourceGrid> {
    ResourceGrid::equidistant(m, tau_max)
}
