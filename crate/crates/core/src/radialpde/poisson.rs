use std::f64::consts::PI;

use super::grid::RadialGrid;
use super::wavefunction::RadialWavefunction;
use crate::error::{Error, Result};

/// Gravitational potential sampled on the radial mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialPotential {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn zero_like(other: RadialPotential) -> Self {
        Self { grid: other.grid, values: vec![0.0; other.values.len()] }
    }
}

/// Solves `ΔV = 4πρ` for a spherically symmetric density by shell
/// decomposition:
///
/// `V(r) = −Q(r)/r − 4π ∫_r^{r_max} s ρ(s) ds`,  `Q(r) = 4π ∫_0^r s² ρ(s) ds`,
///
/// so that `V(r_max) = −Q(r_max)/r_max`.
pub fn solve_poisson(grid: &RadialGrid, density: &[f64]) -> Result<RadialPotential> {
    if density.len() != grid.len() {
        return Err(Error::domain(format!(
            "density has {} values for a grid of {}",
            density.len(),
            grid.len()
        )));
    }
    if let Some((i, rho)) = density.iter().enumerate().find(|(_, &rho)| !rho.is_finite() || rho < -1e-14) {
        return Err(Error::domain(format!("density must be finite and non-negative, got {rho} at node {i}")));
    }
    let mut values = vec![0.0; grid.len()];
    shell_potential(
        grid,
        |i| density[i] * grid.r(i).powi(2),
        |i| density[i] * grid.r(i),
        &mut values,
    );
    Ok(RadialPotential { grid: *grid, values })
}

/// Self-consistent potential of a wavefunction, `ρ = |u|²/r²`.
pub fn potential_of(psi: &RadialWavefunction) -> RadialPotential {
    let grid = *psi.grid();
    let w = psi.radial_weight();
    let mut values = vec![0.0; grid.len()];
    potential_from_weight(&grid, &w, &mut values);
    RadialPotential { grid, values }
}

/// Potential from the radial weight `w = r²ρ = |u|²`, written into `out`.
pub(crate) fn potential_from_weight(grid: &RadialGrid, weight: &[f64], out: &mut [f64]) {
    shell_potential(grid, |i| weight[i], |i| weight[i] / grid.r(i), out);
}

/// `inner(i) = r_i² ρ_i` and `outer(i) = r_i ρ_i`.
fn shell_potential(grid: &RadialGrid, inner: impl Fn(usize) -> f64, outer: impl Fn(usize) -> f64, out: &mut [f64]) {
    let n = grid.len();
    let half = 2.0 * PI * grid.dr();

    // Enclosed mass, trapezoid from the origin where r²ρ vanishes.
    let mut enclosed = half * inner(0);
    out[0] = enclosed;
    for i in 1..n {
        enclosed += half * (inner(i - 1) + inner(i));
        out[i] = enclosed;
    }

    // Outer shells, accumulated inward from r_max.
    let mut shells = 0.0;
    let mut prev = outer(n - 1);
    out[n - 1] = -out[n - 1] / grid.r(n - 1);
    for i in (0..n - 1).rev() {
        let cur = outer(i);
        shells += half * (cur + prev);
        prev = cur;
        out[i] = -out[i] / grid.r(i) - shells;
    }
}
