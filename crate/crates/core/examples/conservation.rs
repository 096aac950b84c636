//! Crank–Nicolson is unitary and time-reversible: the norm holds over many
//! steps, and evolving the conjugate state forward undoes a run.

use schrodinger_newton::radialpde::CrankNicolson;
use schrodinger_newton::scenario::bound_gaussian;

fn main() -> schrodinger_newton::Result<()> {
    let psi0 = bound_gaussian()?;
    let mut propagator = CrankNicolson::new(*psi0.grid(), 0.05)?;

    let mut psi = psi0.clone();
    let mut drift = 0.0f64;
    for _ in 0..10_000 {
        propagator.step(&mut psi)?;
        drift = drift.max((psi.norm() - 1.0).abs());
    }
    println!("norm drift over 10^4 steps: {drift:.1e}");

    let mut back = psi0.clone();
    for _ in 0..1000 {
        propagator.step(&mut back)?;
    }
    back = back.conjugated();
    for _ in 0..1000 {
        propagator.step(&mut back)?;
    }
    let back = back.conjugated();
    let error = back.values().iter().zip(psi0.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("return error after 1000 steps out and back: {error:.1e}");
    Ok(())
}
