//! Reduced dynamics of the Gaussian ansatz.
//!
//! The density is held Gaussian, `ρ = π^{-3/2} R⁻³ exp(−r²/R²)`, and the
//! width obeys `R̈ = 1/R³ − C/R²`: a unit mass in the pseudo-potential
//! `U(R) = 1/(2R²) − C/R` with `C = 2/(3√(2π))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

fn sqrt_two_pi() -> f64 {
    (2.0 * PI).sqrt()
}

/// Gravitational coupling of the width equation, `C = 2/(3√(2π))`.
pub fn coupling() -> f64 {
    2.0 / (3.0 * sqrt_two_pi())
}

/// Zero of the pseudo-potential, `R₀ = 1/(2C) = (3/4)√(2π) ≈ 1.88`.
pub fn critical_width() -> f64 {
    0.75 * sqrt_two_pi()
}

/// Minimum of the pseudo-potential, `R₁ = 2R₀ = (3/2)√(2π) ≈ 3.76`.
pub fn equilibrium_width() -> f64 {
    1.5 * sqrt_two_pi()
}

/// The closed-form constants of the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConstants {
    #[serde(rename = "C")]
    pub coupling: f64,
    #[serde(rename = "R0")]
    pub critical_width: f64,
    #[serde(rename = "R1")]
    pub equilibrium_width: f64,
    #[serde(rename = "Omega")]
    pub linear_frequency: f64,
    #[serde(rename = "E0_var")]
    pub eigenvalue: f64,
}

impl ModelConstants {
    pub fn get() -> Self {
        Self {
            coupling: coupling(),
            critical_width: critical_width(),
            equilibrium_width: equilibrium_width(),
            linear_frequency: linear_frequency(),
            eigenvalue: variational_eigenvalue(),
        }
    }
}

/// `(R₀, R₁)`.
pub fn equilibria() -> (f64, f64) {
    (critical_width(), equilibrium_width())
}

/// Small-oscillation frequency about `R₁`, `Ω = 2/(9π) ≈ 0.0707`.
pub fn linear_frequency() -> f64 {
    2.0 / (9.0 * PI)
}

/// `Ω` from the curvature of `U` at `R₁`: `√(3/R₁⁴ − 2C/R₁³)`.
pub fn linear_frequency_from_curvature() -> f64 {
    let r1 = equilibrium_width();
    (3.0 / r1.powi(4) - 2.0 * coupling() / r1.powi(3)).sqrt()
}

fn check_width(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("width must be positive, got {r}")))
    }
}

pub fn pseudo_potential(r: f64) -> Result<f64> {
    check_width(r)?;
    Ok(0.5 / (r * r) - coupling() / r)
}

pub fn lagrangian(r: f64, rdot: f64) -> Result<f64> {
    Ok(0.5 * rdot * rdot - pseudo_potential(r)?)
}

/// Right-hand side of the width equation, `1/R³ − C/R²`.
pub fn acceleration(r: f64) -> Result<f64> {
    check_width(r)?;
    Ok(1.0 / r.powi(3) - coupling() / (r * r))
}

/// Kinetic energy of the Gaussian of width `R`, `3/(4R²)`.
pub fn gaussian_kinetic_energy(r: f64) -> Result<f64> {
    check_width(r)?;
    Ok(0.75 / (r * r))
}

/// Self-gravitational energy `½∫ρV` of the Gaussian of width `R`, `−1/(√(2π)R)`.
pub fn gaussian_potential_energy(r: f64) -> Result<f64> {
    check_width(r)?;
    Ok(-1.0 / (sqrt_two_pi() * r))
}

/// Eigenvalue `K + 2P` of the Gaussian at `R₁`, equal to `−1/(2π)`.
pub fn variational_eigenvalue() -> f64 {
    let r1 = equilibrium_width();
    0.75 / (r1 * r1) - 2.0 / (sqrt_two_pi() * r1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationalState {
    pub t: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Rdot")]
    pub rdot: f64,
}

impl VariationalState {
    pub fn at_rest(r: f64) -> Self {
        Self { t: 0.0, r, rdot: 0.0 }
    }

    /// `Ṙ²/2 + U(R)`.
    pub fn energy(&self) -> Result<f64> {
        Ok(0.5 * self.rdot * self.rdot + pseudo_potential(self.r)?)
    }

    /// Sum of the magnitudes of the three energy terms; never zero for a
    /// valid state.
    fn energy_scale(&self) -> f64 {
        0.5 * self.rdot * self.rdot + 0.5 / (self.r * self.r) + coupling() / self.r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// Positive energy: unbounded expansion, `R ~ t`.
    Expanding,
    /// Negative energy: nonlinear oscillation about `R₁`.
    Bound,
    /// Zero energy: marginal expansion, `R ~ t^{2/3}`.
    Critical,
}

pub const DEFAULT_REGIME_EPSILON: f64 = 1e-12;

pub fn classify_regime(initial: &VariationalState, epsilon: f64) -> Result<Regime> {
    let e = initial.energy()?;
    Ok(if e > epsilon {
        Regime::Expanding
    } else if e < -epsilon {
        Regime::Bound
    } else {
        Regime::Critical
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Largest admissible relative energy drift.
    pub energy_tol: f64,
    /// Widths at or below this abort the run.
    pub r_floor: f64,
    /// Keep every `sample_every`-th step.
    pub sample_every: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_end: 100.0, energy_tol: 1e-8, r_floor: 1e-6, sample_every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalTrajectory {
    pub states: Vec<VariationalState>,
    /// Integrator step.
    pub dt: f64,
    /// Steps between stored samples.
    pub sample_every: usize,
    /// `max |E(t) − E(0)|` relative to `|E(0)|`, or to the energy scale of
    /// the initial state when `E(0)` vanishes.
    pub energy_drift: f64,
}

impl VariationalTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.r).collect()
    }

    /// Spacing of the stored samples.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    pub fn last(&self) -> &VariationalState {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// Velocity-Verlet integration of the width equation.
pub fn integrate(initial: VariationalState, config: &IntegrationConfig) -> Result<VariationalTrajectory> {
    let IntegrationConfig { dt, t_end, energy_tol, r_floor, sample_every } = *config;
    check_width(initial.r)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::domain(format!("dt must be positive, got {dt}")));
    }
    if !(t_end > initial.t) {
        return Err(Error::domain(format!("t_end {t_end} must exceed the initial time {}", initial.t)));
    }
    if sample_every == 0 {
        return Err(Error::domain("sample_every must be at least 1"));
    }

    let steps = ((t_end - initial.t) / dt).round() as usize;
    let e0 = initial.energy()?;
    let scale = if e0.abs() > 1e-6 * initial.energy_scale() { e0.abs() } else { initial.energy_scale() };

    let mut states = Vec::with_capacity(steps / sample_every + 1);
    states.push(initial);
    let mut drift = 0.0f64;
    let (mut r, mut v) = (initial.r, initial.rdot);
    let mut a = acceleration(r)?;

    for step in 1..=steps {
        let t = initial.t + step as f64 * dt;
        r += v * dt + 0.5 * a * dt * dt;
        if !(r > r_floor) {
            return Err(Error::Collapse {
                time: t,
                radius: r,
                partial: Box::new(VariationalTrajectory { states, dt, sample_every, energy_drift: drift }),
            });
        }
        let a_next = acceleration(r)?;
        v += 0.5 * (a + a_next) * dt;
        a = a_next;

        let state = VariationalState { t, r, rdot: v };
        drift = drift.max((state.energy()? - e0).abs() / scale);
        if drift > energy_tol {
            return Err(Error::StepSize(format!(
                "relative energy drift {drift:e} exceeds {energy_tol:e} at t = {t}; reduce dt below {dt}"
            )));
        }
        if step % sample_every == 0 {
            states.push(state);
        }
    }

    Ok(VariationalTrajectory { states, dt, sample_every, energy_drift: drift })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub std_error: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 50;

/// Least-squares slope of `log R` against `log t` over the final
/// `window_fraction` of the trajectory's log-time span.
pub fn fit_asymptotic_exponent(traj: &VariationalTrajectory, window_fraction: f64) -> Result<PowerLawFit> {
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::domain(format!("window fraction must lie in (0, 1), got {window_fraction}")));
    }
    let positive: Vec<&VariationalState> = traj.states.iter().filter(|s| s.t > 0.0).collect();
    let (first, last) = match (positive.first(), positive.last()) {
        (Some(f), Some(l)) if l.t > f.t => (f.t.ln(), l.t.ln()),
        _ => return Err(Error::domain("trajectory spans no positive time interval")),
    };
    let start = last - window_fraction * (last - first);
    let window: Vec<(f64, f64)> = positive
        .iter()
        .filter(|s| s.t.ln() >= start)
        .map(|s| (s.t.ln(), s.r.ln()))
        .collect();

    if window.len() < MIN_FIT_POINTS {
        return Err(Error::domain(format!(
            "fit window holds {} samples, at least {MIN_FIT_POINTS} are required",
            window.len()
        )));
    }
    if window.windows(2).any(|w| w[1].1 <= w[0].1) {
        return Err(Error::NotExpanding);
    }

    let n = window.len() as f64;
    let mean_x = window.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = window.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = window.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = window.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = window.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let std_error = (ssr / (n - 2.0) / sxx).sqrt();

    Ok(PowerLawFit { exponent: slope, std_error, points: window.len() })
}
