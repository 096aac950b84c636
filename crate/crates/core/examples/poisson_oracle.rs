//! Discrete radial Poisson solve of a Gaussian against −erf(r/R)/r.

use schrodinger_newton::scenario::{convergence_report, poisson_error, Study};
use schrodinger_newton::variational::equilibrium_width;

fn main() -> schrodinger_newton::Result<()> {
    println!("n = 4000, r_max = 40: max relative error {:.2e}", poisson_error(4000, 40.0, equilibrium_width())?);
    let report = convergence_report(Study::Poisson, 4)?;
    for row in &report.rows {
        println!("dr {:<6} error {:.3e}  order {}", row.step, row.error, row.order.map_or("-".into(), |p| format!("{p:.3}")));
    }
    Ok(())
}
