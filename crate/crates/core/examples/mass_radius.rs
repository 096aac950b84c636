//! Physical scales: where a constant-density sphere becomes small enough
//! for its own gravity to stop the spreading of its centre-of-mass wavefunction.

use schrodinger_newton::units::{critical_mass_amu, mass_radius_diagram, Quantity, UnitSystem, GOLD_NUMBER_DENSITY};

fn main() -> schrodinger_newton::Result<()> {
    println!("critical mass at 0.707 µm: {:.3e} amu", critical_mass_amu(0.707e-6)?);

    let diagram = mass_radius_diagram(1e8, 1e12, 9, GOLD_NUMBER_DENSITY)?;
    println!("{:>10} {:>12} {:>12}", "mass/amu", "R_crit/m", "R_gold/m");
    for row in &diagram.rows {
        println!("{:>10.2e} {:>12.3e} {:>12.3e}", row.mass_amu, row.r_critical_m, row.r_density_m);
    }
    let x = diagram.intersection;
    println!("gold intersection: {:.3e} amu at {:.3e} m", x.mass_amu, x.radius_m);

    let units = UnitSystem::from_amu(x.mass_amu)?;
    println!("at that mass one length unit is {:.3e} m and one time unit {:.3e} s",
        units.scale(Quantity::Length), units.scale(Quantity::Time));
    Ok(())
}
