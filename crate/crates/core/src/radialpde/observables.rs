use std::f64::consts::PI;

use serde::Serialize;

use super::poisson::RadialPotential;
use super::wavefunction::RadialWavefunction;
use crate::error::{Error, Result};
use crate::quadrature::trapezoid_by;

/// Norm used to divide expectation values, warning when it is off unity.
fn norm_for_expectation(psi: &RadialWavefunction) -> f64 {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-8 {
        log::warn!("expectation value of a state with norm {norm}; renormalising");
    }
    norm
}

/// `⟨r²⟩ = 4π ∫ r² |u|² dr`.
pub fn mean_square_radius(psi: &RadialWavefunction) -> f64 {
    let grid = psi.grid();
    let u = psi.values();
    4.0 * PI * trapezoid_by(u.len(), grid.dr(), |i| grid.r(i).powi(2) * u[i].norm_sqr()) / norm_for_expectation(psi)
}

/// `√⟨r²⟩`.
pub fn rms_radius(psi: &RadialWavefunction) -> f64 {
    mean_square_radius(psi).sqrt()
}

/// `K = ½ ∫|∇Ψ|² d³r = 2π ∫ |u'|² dr`, with forward differences through the
/// boundary zeros. This is exactly `⟨Ψ| −½Δ |Ψ⟩` for the centred
/// second-difference Laplacian used in propagation.
pub fn kinetic_energy(psi: &RadialWavefunction) -> f64 {
    let u = psi.values();
    let dr = psi.grid().dr();
    let first = u[0].norm_sqr();
    let interior: f64 = u.windows(2).map(|w| (w[1] - w[0]).norm_sqr()).sum();
    2.0 * PI * (first + interior) / dr / norm_for_expectation(psi)
}

/// `P = ½ ∫ ρ V d³r = 2π ∫ |u|² V dr`.
pub fn interaction_energy(psi: &RadialWavefunction, potential: &RadialPotential) -> Result<f64> {
    if !psi.grid().same_as(potential.grid()) {
        return Err(Error::domain("wavefunction and potential live on different grids"));
    }
    let u = psi.values();
    let v = potential.values();
    Ok(2.0 * PI * trapezoid_by(u.len(), psi.grid().dr(), |i| u[i].norm_sqr() * v[i]) / norm_for_expectation(psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energies {
    #[serde(rename = "K")]
    pub kinetic: f64,
    #[serde(rename = "P")]
    pub interaction: f64,
    /// Conserved energy `K + P`.
    #[serde(rename = "E_total")]
    pub total: f64,
    /// `⟨H⟩ = K + 2P` with the self-consistent potential.
    #[serde(rename = "E_eig")]
    pub eigenvalue: f64,
}

impl Energies {
    /// `|P|/K`.
    pub fn virial_ratio(&self) -> Result<f64> {
        crate::analysis::virial_ratio(self.kinetic, self.interaction)
    }
}

pub fn energies(psi: &RadialWavefunction, potential: &RadialPotential) -> Result<Energies> {
    let kinetic = kinetic_energy(psi);
    let interaction = interaction_energy(psi, potential)?;
    Ok(Energies { kinetic, interaction, total: kinetic + interaction, eigenvalue: kinetic + 2.0 * interaction })
}
