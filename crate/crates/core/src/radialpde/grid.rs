use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 16;

/// Uniform radial mesh `r_j = j·dr`, `j = 1..=n`, so `r_n = r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    n: usize,
    dr: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::domain(format!("r_max must be positive, got {r_max}")));
        }
        if n < MIN_POINTS {
            return Err(Error::domain(format!("radial grid needs at least {MIN_POINTS} points, got {n}")));
        }
        Ok(Self { n, dr: r_max / n as f64 })
    }

    /// Grid with spacing `dr` and `n` points.
    pub fn with_spacing(dr: f64, n: usize) -> Result<Self> {
        Self::new(dr * n as f64, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn r_max(&self) -> f64 {
        self.n as f64 * self.dr
    }

    /// Radius of the zero-based node `i`.
    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dr
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.r(i)).collect()
    }

    /// Index of the first node in the outer `fraction` of the grid.
    pub fn outer_start(&self, fraction: f64) -> usize {
        ((1.0 - fraction) * self.n as f64).floor() as usize
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.n == other.n && (self.dr - other.dr).abs() <= 1e-12 * self.dr
    }
}

pub fn build_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    RadialGrid::new(r_max, n)
}
