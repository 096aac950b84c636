//! Slightly stretched ground state evolved in real time; the rms radius
//! rings at the lowest breathing frequency. Takes a few seconds in release.

use schrodinger_newton::analysis::{dominant_frequency, Window};
use schrodinger_newton::radialpde::evolve;
use schrodinger_newton::scenario::{default_ground_state, Perturbation, OSCILLATION_T_END, PDE_DT, PDE_SAMPLE_EVERY};
use schrodinger_newton::radialpde::EvolveConfig;

fn main() -> schrodinger_newton::Result<()> {
    let gs = default_ground_state()?;
    let psi = Perturbation::default().apply(&gs.psi)?;
    let config = EvolveConfig { dt: PDE_DT, t_end: OSCILLATION_T_END, sample_every: PDE_SAMPLE_EVERY, ..Default::default() };
    let run = evolve(&psi, &config)?;

    let spec = run.series.spectrum("rms", Window::Hann)?;
    let peak = dominant_frequency(&spec, None)?;
    println!("peak frequency {:.4} (bin {:.4})", peak.omega, spec.resolution());
    println!("boundary contamination: {}", run.boundary_contamination);
    Ok(())
}
