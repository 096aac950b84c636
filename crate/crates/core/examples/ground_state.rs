//! Imaginary-time relaxation to the ground state. Pass a path to also save
//! the state for later real-time runs.

use schrodinger_newton::analysis::gaussianity;
use schrodinger_newton::io::{ground_state_table, Format};
use schrodinger_newton::scenario::default_ground_state;
use schrodinger_newton::variational::variational_eigenvalue;

fn main() -> schrodinger_newton::Result<()> {
    let gs = default_ground_state()?;
    println!("E0          {:.5}", gs.eigenvalue);
    println!("E0 (ansatz) {:.5}", variational_eigenvalue());
    println!("K, P        {:.5}, {:.5}", gs.kinetic, gs.interaction);
    println!("|P|/K       {:.5}", gs.virial_ratio);
    println!("iterations  {}", gs.iterations);
    let fit = gaussianity(gs.psi.grid(), &gs.psi.density())?;
    println!("equal-width Gaussian: R = {:.3}, distance {:.3}", fit.best_r, fit.distance);

    if let Some(path) = std::env::args().nth(1) {
        ground_state_table(&gs.psi, &gs.potential).save(path.as_ref(), Format::Csv)?;
        println!("saved {path}");
    }
    Ok(())
}
