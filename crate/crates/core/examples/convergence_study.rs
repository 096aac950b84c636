//! Observed orders of accuracy for each discretisation.

use schrodinger_newton::scenario::{convergence_report, Study};

fn main() -> schrodinger_newton::Result<()> {
    for study in Study::ALL {
        let r = convergence_report(study, 4)?;
        let order = r.observed_order.map_or("inconclusive".into(), |p| format!("{p:.3}"));
        println!("{study:<8} {:<30} order {order}", r.quantity);
    }
    Ok(())
}
