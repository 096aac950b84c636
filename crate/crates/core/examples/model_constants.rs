//! Constants of the Gaussian width model and a look at its pseudo-potential.

use schrodinger_newton::variational::{pseudo_potential, ModelConstants};

fn main() -> schrodinger_newton::Result<()> {
    let c = ModelConstants::get();
    println!("{}", serde_json::to_string_pretty(&c)?);

    println!("\n{:>6} {:>12}", "R", "U(R)");
    for r in [0.5, 1.0, c.critical_width, 2.5, c.equilibrium_width, 6.0, 10.0, 20.0] {
        println!("{r:>6.3} {:>12.6}", pseudo_potential(r)?);
    }
    Ok(())
}
