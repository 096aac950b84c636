//! A Gaussian of the equilibrium width is not the ground state, so it
//! oscillates with finite amplitude and sheds a little mass outward.

use schrodinger_newton::analysis::{dominant_frequency, Window};
use schrodinger_newton::radialpde::{evolve, EvolveConfig};
use schrodinger_newton::scenario::{bound_gaussian, profile_check, PDE_DT, PROFILE_TIME};
use schrodinger_newton::variational::linear_frequency;

fn main() -> schrodinger_newton::Result<()> {
    let psi = bound_gaussian()?;
    let run = evolve(&psi, &EvolveConfig { t_end: 2000.0, ..Default::default() })?;
    let peak = dominant_frequency(&run.series.spectrum("rms", Window::Hann)?, None)?;
    println!("peak {:.4}, linear estimate {:.4}", peak.omega, linear_frequency());
    println!("mass reaching the outer layer: {:.1e}", run.max_outer_mass);

    let (check, _) = profile_check(&psi, PROFILE_TIME, PDE_DT)?;
    println!(
        "t = {}: equal-width Gaussian distance {:.3} (R = {:.3}); closest Gaussian {:.3} (R = {:.3})",
        check.t, check.moment.distance, check.moment.best_r, check.closest.distance, check.closest.best_r
    );
    Ok(())
}
