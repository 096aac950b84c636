//! Widths released at rest below, at and above the critical width: free
//! expansion (R ~ t), marginal expansion (R ~ t^(2/3)) and bound oscillation.

use schrodinger_newton::scenario::regime_branches;

fn main() -> schrodinger_newton::Result<()> {
    for b in regime_branches()? {
        let last = b.trajectory.last();
        print!("R(0) = {:.3}  {:<10} R({:.0}) = {:>8.2}", b.initial_width, format!("{:?}", b.regime), last.t, last.r);
        match b.exponent {
            Some(p) => println!("  exponent {p:.4} ± {:.1e}", b.std_error.unwrap_or(0.0)),
            None => println!(),
        }
    }
    Ok(())
}
