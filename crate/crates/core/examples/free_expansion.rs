//! A compressed Gaussian (0.3 of the equilibrium width) blows apart. The
//! second run switches gravity off, where the profile stays exactly Gaussian.
//! Uses a 16000-point grid; expect about half a minute in release.

use schrodinger_newton::analysis::gaussianity;
use schrodinger_newton::radialpde::{evolve, EvolveConfig};
use schrodinger_newton::scenario::{expansion_gaussian, profile_check, EXPANSION_TIME, PDE_DT};

fn main() -> schrodinger_newton::Result<()> {
    let psi = expansion_gaussian()?;
    let (check, run) = profile_check(&psi, EXPANSION_TIME, PDE_DT)?;
    println!(
        "self-gravitating: distance {:.3} at R = {:.1}, closest {:.3}; contaminated: {}",
        check.moment.distance, check.moment.best_r, check.closest.distance, run.boundary_contamination
    );

    let config = EvolveConfig { dt: PDE_DT, t_end: EXPANSION_TIME, snapshot_times: vec![EXPANSION_TIME], gravity: false, ..Default::default() };
    let free = evolve(&psi, &config)?;
    let s = &free.snapshots[0];
    let fit = gaussianity(s.psi.grid(), &s.psi.density())?;
    println!("free:             distance {:.4} at R = {:.1}", fit.distance, fit.best_r);
    Ok(())
}
