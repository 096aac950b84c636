//! Small oscillations of the Gaussian width about equilibrium. The
//! spectral peak of R(t) should sit at the linear frequency 2/(9π).

use schrodinger_newton::analysis::{dominant_frequency, spectrum, Window};
use schrodinger_newton::variational::{equilibrium_width, integrate, linear_frequency, IntegrationConfig, VariationalState};

fn main() -> schrodinger_newton::Result<()> {
    let start = VariationalState::at_rest(equilibrium_width() * (1.0 + 1e-3));
    let config = IntegrationConfig { t_end: 2000.0, sample_every: 100, ..Default::default() };
    let traj = integrate(start, &config)?;

    let spec = spectrum(&traj.radii(), traj.sample_interval(), Window::Hann)?;
    let peak = dominant_frequency(&spec, None)?;
    println!("peak        {:.5}", peak.omega);
    println!("2/(9π)      {:.5}", linear_frequency());
    println!("bin width   {:.5}", spec.resolution());
    println!("energy drift {:.2e}", traj.energy_drift);
    Ok(())
}
