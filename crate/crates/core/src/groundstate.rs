//! Stationary ground state by imaginary-time relaxation.
//!
//! Starting from a Gaussian, the state is repeatedly propagated with the
//! real Crank–Nicolson system `(1 + dτH/2) uᵏ⁺¹ = (1 − dτH/2) uᵏ`, where
//! `H` carries the potential of the current density, and renormalised.
//! The energy `K + P` decreases along the flow; a step that raises it is
//! retried with half the step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::radialpde::{
    energies, gaussian_wavefunction, potential_of, Energies, RadialGrid, RadialPotential, RadialWavefunction,
};
use crate::tridiagonal::ThomasSolver;
use crate::variational::equilibrium_width;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateConfig {
    /// Convergence threshold on the eigenvalue change per step.
    pub tol: f64,
    pub max_iter: usize,
    /// Width of the initial Gaussian; `R₁` when absent.
    pub initial_width: Option<f64>,
    pub dtau: f64,
    /// Smallest step before the relaxation is declared stuck.
    pub min_dtau: f64,
}

impl Default for GroundStateConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 50_000, initial_width: None, dtau: 0.1, min_dtau: 1e-8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundStateResult {
    #[serde(skip)]
    pub psi: RadialWavefunction,
    #[serde(skip)]
    pub potential: RadialPotential,
    #[serde(rename = "E0")]
    pub eigenvalue: f64,
    #[serde(rename = "E_total")]
    pub total_energy: f64,
    #[serde(rename = "K")]
    pub kinetic: f64,
    #[serde(rename = "P")]
    pub interaction: f64,
    pub virial_ratio: f64,
    pub iterations: usize,
    pub residual: f64,
    pub dtau: f64,
    /// `K + P` after every accepted step.
    #[serde(skip)]
    pub energy_history: Vec<f64>,
}

/// Eigenvalue `K + 2P` of a state in its self-consistent potential.
pub fn eigenvalue(psi: &RadialWavefunction, potential: &RadialPotential) -> Result<f64> {
    Ok(energies(psi, potential)?.eigenvalue)
}

/// Conserved energy `K + P`.
pub fn total_energy(psi: &RadialWavefunction, potential: &RadialPotential) -> Result<f64> {
    Ok(energies(psi, potential)?.total)
}

struct Relaxation {
    grid: RadialGrid,
    solver: ThomasSolver<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
}

impl Relaxation {
    fn new(grid: RadialGrid) -> Self {
        let m = grid.len() - 1;
        Self {
            grid,
            solver: ThomasSolver::new(),
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            rhs: vec![0.0; m],
        }
    }

    fn step(&mut self, u: &[f64], potential: &[f64], dtau: f64) -> Result<Vec<f64>> {
        let m = self.grid.len() - 1;
        let inv_dr2 = self.grid.dr().powi(-2);
        let hop = 0.25 * dtau * inv_dr2;
        self.lower.iter_mut().for_each(|x| *x = -hop);
        self.upper.iter_mut().for_each(|x| *x = -hop);
        for j in 0..m {
            let h = 0.5 * dtau * (inv_dr2 + potential[j]);
            self.diag[j] = 1.0 + h;
            let left = if j > 0 { u[j - 1] } else { 0.0 };
            let right = if j + 1 < m { u[j + 1] } else { 0.0 };
            self.rhs[j] = (1.0 - h) * u[j] + hop * (left + right);
        }
        let mut out = vec![0.0; self.grid.len()];
        self.solver.solve(&self.lower, &self.diag, &self.upper, &self.rhs, &mut out[..m])?;
        Ok(out)
    }
}

fn measure(grid: &RadialGrid, u: &[f64]) -> Result<(RadialWavefunction, RadialPotential, Energies)> {
    let psi = RadialWavefunction::from_real(*grid, u)?.normalized()?;
    let potential = potential_of(&psi);
    let e = energies(&psi, &potential)?;
    Ok((psi, potential, e))
}

pub fn solve_ground_state(grid: &RadialGrid, config: &GroundStateConfig) -> Result<GroundStateResult> {
    if !(config.tol > 0.0) || !(config.dtau > 0.0) {
        return Err(Error::domain("tolerance and imaginary-time step must be positive"));
    }
    let width = config.initial_width.unwrap_or_else(equilibrium_width);
    let (initial, _) = gaussian_wavefunction(grid, width)?;
    let (mut psi, mut potential, mut e) = measure(grid, &real_part(&initial))?;

    let mut relax = Relaxation::new(*grid);
    let mut dtau = config.dtau;
    let mut history = vec![e.total];
    let mut residual = f64::INFINITY;

    for iteration in 1..=config.max_iter {
        let u = real_part(&psi);
        let next = relax.step(&u, potential.values(), dtau)?;
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("non-finite amplitude at iteration {iteration}")));
        }
        let (next_psi, next_potential, next_e) = measure(grid, &next)?;

        if next_e.total > e.total + 1e-12 {
            dtau *= 0.5;
            log::debug!("energy rose at iteration {iteration}; halving dtau to {dtau}");
            if dtau < config.min_dtau {
                return Err(Error::NonConvergence { iterations: iteration, residual });
            }
            continue;
        }

        residual = (next_e.eigenvalue - e.eigenvalue).abs();
        psi = next_psi;
        potential = next_potential;
        e = next_e;
        history.push(e.total);

        if residual < config.tol {
            return finish(psi, potential, e, iteration, residual, dtau, history);
        }
    }
    Err(Error::NonConvergence { iterations: config.max_iter, residual })
}

fn real_part(psi: &RadialWavefunction) -> Vec<f64> {
    psi.values().iter().map(|z| z.re).collect()
}

fn finish(
    psi: RadialWavefunction,
    potential: RadialPotential,
    e: Energies,
    iterations: usize,
    residual: f64,
    dtau: f64,
    energy_history: Vec<f64>,
) -> Result<GroundStateResult> {
    Ok(GroundStateResult {
        virial_ratio: e.virial_ratio()?,
        psi,
        potential,
        eigenvalue: e.eigenvalue,
        total_energy: e.total,
        kinetic: e.kinetic,
        interaction: e.interaction,
        iterations,
        residual,
        dtau,
        energy_history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::gaussian_distance;
    use crate::radialpde::{build_grid, evolve, EvolveConfig};
    use crate::variational::variational_eigenvalue;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn default_ground_state() -> GroundStateResult {
        solve_ground_state(&build_grid(40.0, 4000).unwrap(), &GroundStateConfig::default()).unwrap()
    }

    #[test]
    fn ground_state_energies() {
        let gs = default_ground_state();
        assert!((gs.eigenvalue - -0.163).abs() <= 0.002, "E0 = {}", gs.eigenvalue);
        assert!((gs.virial_ratio - 2.0).abs() <= 0.02, "virial = {}", gs.virial_ratio);
        assert!(((variational_eigenvalue() - gs.eigenvalue) / gs.eigenvalue).abs() < 0.03);
        assert_relative_eq!(gs.total_energy, -gs.kinetic, max_relative = 0.01);
        assert!(gs.eigenvalue < 0.0);
    }

    #[test]
    fn ground_state_is_nodeless_and_gaussian_like() {
        let gs = default_ground_state();
        let u = gs.psi.values();
        assert!(u[..u.len() - 1].iter().all(|z| z.re > 0.0 && z.im == 0.0));
        let d = gaussian_distance(gs.psi.grid(), &gs.psi.density(), equilibrium_width()).unwrap();
        assert!(d <= 0.15, "{d}");
    }

    #[test]
    fn relaxation_lowers_the_energy_monotonically() {
        let gs = default_ground_state();
        assert!(gs.energy_history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn eigenvalue_of_the_variational_gaussian() {
        let grid = build_grid(40.0, 4000).unwrap();
        let (psi, _) = gaussian_wavefunction(&grid, equilibrium_width()).unwrap();
        let v = potential_of(&psi);
        assert_relative_eq!(eigenvalue(&psi, &v).unwrap(), -1.0 / (2.0 * PI), max_relative = 1e-4);
        assert_relative_eq!(total_energy(&psi, &v).unwrap(), -1.0 / (6.0 * PI), max_relative = 1e-4);
        let other = potential_of(&gaussian_wavefunction(&build_grid(40.0, 2000).unwrap(), 2.0).unwrap().0);
        assert!(matches!(eigenvalue(&psi, &other), Err(Error::Domain(_))));
    }

    #[test]
    fn refinement_barely_moves_the_eigenvalue() {
        let coarse = default_ground_state();
        let fine = solve_ground_state(&build_grid(40.0, 8000).unwrap(), &GroundStateConfig::default()).unwrap();
        assert!(((fine.eigenvalue - coarse.eigenvalue) / coarse.eigenvalue).abs() < 0.005);
    }

    #[test]
    fn ground_state_is_stationary_in_real_time() {
        let gs = default_ground_state();
        let run = evolve(&gs.psi, &EvolveConfig { dt: 0.05, t_end: 100.0, sample_every: 20, ..Default::default() }).unwrap();
        let rms = run.series.channel("rms").unwrap();
        let (lo, hi) = rms.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        assert!((hi - lo) / rms[0] < 1e-3, "{lo} .. {hi}");
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let config = GroundStateConfig { max_iter: 3, ..Default::default() };
        let err = solve_ground_state(&build_grid(40.0, 400).unwrap(), &config).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 3, .. }));
        assert_eq!(err.exit_code(), 4);
    }
}
