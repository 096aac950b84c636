use num_complex::Complex64;

use super::grid::RadialGrid;
use super::observables::energies;
use super::poisson::{potential_from_weight, potential_of, RadialPotential};
use super::wavefunction::RadialWavefunction;
use super::{BOUNDARY_LAYER, BOUNDARY_MASS_LIMIT};
use crate::analysis::ObservableSeries;
use crate::error::{Error, Result};
use crate::tridiagonal::ThomasSolver;

/// Largest norm change tolerated in a single step.
pub const STEP_NORM_TOLERANCE: f64 = 1e-8;

/// Self-consistent Crank–Nicolson propagator for
/// `i ∂u/∂t = −½ ∂²u/∂r² + V u`.
///
/// Each step solves the implicit system twice: a predictor with the
/// potential of `|uⁿ|²`, then a corrector with the potential of the
/// time-centred density `½(|uⁿ|² + |u*|²)`.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    grid: RadialGrid,
    dt: f64,
    gravity: bool,
    solver: ThomasSolver<Complex64>,
    lower: Vec<Complex64>,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
    rhs: Vec<Complex64>,
    start: Vec<Complex64>,
    trial: Vec<Complex64>,
    weight: Vec<f64>,
    potential: Vec<f64>,
}

impl CrankNicolson {
    pub fn new(grid: RadialGrid, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("dt must be positive, got {dt}")));
        }
        let m = grid.len() - 1;
        let off = Complex64::new(0.0, -dt / (4.0 * grid.dr().powi(2)));
        Ok(Self {
            grid,
            dt,
            gravity: true,
            solver: ThomasSolver::new(),
            lower: vec![off; m],
            diag: vec![Complex64::default(); m],
            upper: vec![off; m],
            rhs: vec![Complex64::default(); m],
            start: vec![Complex64::default(); grid.len()],
            trial: vec![Complex64::default(); grid.len()],
            weight: vec![0.0; grid.len()],
            potential: vec![0.0; grid.len()],
        })
    }

    /// Switches self-gravity off, leaving free Schrödinger propagation.
    pub fn without_gravity(mut self) -> Self {
        self.gravity = false;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&mut self, psi: &mut RadialWavefunction) -> Result<()> {
        if !psi.grid().same_as(&self.grid) {
            return Err(Error::domain("wavefunction grid differs from the propagator grid"));
        }
        let norm_before = psi.norm();
        self.start.copy_from_slice(psi.values());

        // Predictor.
        for (w, z) in self.weight.iter_mut().zip(&self.start) {
            *w = z.norm_sqr();
        }
        self.refresh_potential();
        let mut trial = std::mem::take(&mut self.trial);
        self.implicit_solve(&mut trial)?;

        // Corrector with the time-centred density.
        for ((w, a), b) in self.weight.iter_mut().zip(&self.start).zip(&trial) {
            *w = 0.5 * (a.norm_sqr() + b.norm_sqr());
        }
        self.refresh_potential();
        let result = self.implicit_solve(psi.values_mut());
        self.trial = trial;
        result?;

        if !psi.is_finite() {
            return Err(Error::Numerical("non-finite amplitude after Crank-Nicolson step".into()));
        }
        let drift = (psi.norm() - norm_before).abs();
        if drift > STEP_NORM_TOLERANCE {
            return Err(Error::StepSize(format!(
                "norm changed by {drift:e} in one step of dt = {}",
                self.dt
            )));
        }
        Ok(())
    }

    fn refresh_potential(&mut self) {
        if self.gravity {
            potential_from_weight(&self.grid, &self.weight, &mut self.potential);
        } else {
            self.potential.iter_mut().for_each(|v| *v = 0.0);
        }
    }

    /// `(1 + i dt H/2) out = (1 − i dt H/2) start` on the interior nodes,
    /// with the current potential.
    fn implicit_solve(&mut self, out: &mut [Complex64]) -> Result<()> {
        let m = self.grid.len() - 1;
        let inv_dr2 = self.grid.dr().powi(-2);
        let half_dt = 0.5 * self.dt;
        let hop = Complex64::new(0.0, self.dt * 0.25 * inv_dr2);
        let zero = Complex64::default();
        for j in 0..m {
            let h = Complex64::new(0.0, half_dt * (inv_dr2 + self.potential[j]));
            self.diag[j] = 1.0 + h;
            let left = if j > 0 { self.start[j - 1] } else { zero };
            let right = if j + 1 < m { self.start[j + 1] } else { zero };
            self.rhs[j] = (1.0 - h) * self.start[j] + hop * (left + right);
        }
        self.solver.solve(&self.lower, &self.diag, &self.upper, &self.rhs, &mut out[..m])?;
        out[m] = zero;
        Ok(())
    }
}

/// One self-consistent step of size `dt`.
pub fn crank_nicolson_step(psi: &RadialWavefunction, dt: f64) -> Result<RadialWavefunction> {
    let mut next = psi.clone();
    CrankNicolson::new(*psi.grid(), dt)?.step(&mut next)?;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Steps between recorded observable samples.
    pub sample_every: usize,
    /// Times at which the full state is kept, rounded to the nearest step.
    pub snapshot_times: Vec<f64>,
    pub gravity: bool,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self { dt: 0.05, t_end: 100.0, sample_every: 10, snapshot_times: Vec::new(), gravity: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub psi: RadialWavefunction,
    pub potential: RadialPotential,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    /// Channels `norm`, `rms`, `K`, `P`, `E_total`, `E_eig`.
    pub series: ObservableSeries,
    pub snapshots: Vec<Snapshot>,
    /// Set when more than `1e-6` of the mass reached the outer tenth of the grid.
    pub boundary_contamination: bool,
    pub max_outer_mass: f64,
    pub final_state: RadialWavefunction,
}

pub const OBSERVABLE_CHANNELS: [&str; 6] = ["norm", "rms", "K", "P", "E_total", "E_eig"];

fn potential_for(psi: &RadialWavefunction, gravity: bool) -> RadialPotential {
    let mut v = potential_of(psi);
    if !gravity {
        v = RadialPotential::zero_like(v);
    }
    v
}

fn record(series: &mut ObservableSeries, t: f64, psi: &RadialWavefunction, potential: &RadialPotential) -> Result<()> {
    let e = energies(psi, potential)?;
    series.push(t, &[psi.norm(), super::rms_radius(psi), e.kinetic, e.interaction, e.total, e.eigenvalue])
}

/// Real-time evolution from `psi0` at `t = 0` to `t_end`.
pub fn evolve(psi0: &RadialWavefunction, config: &EvolveConfig) -> Result<Evolution> {
    if !(config.t_end > 0.0) {
        return Err(Error::domain(format!("t_end must be positive, got {}", config.t_end)));
    }
    if config.sample_every == 0 {
        return Err(Error::domain("sample_every must be at least 1"));
    }
    let mut propagator = CrankNicolson::new(*psi0.grid(), config.dt)?;
    if !config.gravity {
        propagator = propagator.without_gravity();
    }
    let steps = (config.t_end / config.dt).round() as usize;
    let snapshot_steps: Vec<usize> = config.snapshot_times.iter().map(|t| (t / config.dt).round() as usize).collect();

    let mut psi = psi0.clone();
    let mut series = ObservableSeries::new(&OBSERVABLE_CHANNELS);
    let mut snapshots = Vec::new();
    let mut max_outer_mass = 0.0f64;

    for step in 0..=steps {
        if step > 0 {
            if let Err(source) = propagator.step(&mut psi) {
                return Err(Error::Evolution {
                    time: step as f64 * config.dt,
                    source: Box::new(source),
                    partial: Box::new(series),
                });
            }
        }
        let t = step as f64 * config.dt;
        let sample = step % config.sample_every == 0;
        let snap = snapshot_steps.contains(&step);
        if sample || snap {
            let potential = potential_for(&psi, config.gravity);
            if sample {
                record(&mut series, t, &psi, &potential)?;
                max_outer_mass = max_outer_mass.max(psi.outer_mass(BOUNDARY_LAYER));
            }
            if snap {
                snapshots.push(Snapshot { t, psi: psi.clone(), potential });
            }
        }
    }

    let boundary_contamination = max_outer_mass > BOUNDARY_MASS_LIMIT;
    if boundary_contamination {
        log::warn!("boundary contamination: up to {max_outer_mass:e} of the mass reached the outer grid layer");
    }
    Ok(Evolution { series, snapshots, boundary_contamination, max_outer_mass, final_state: psi })
}
