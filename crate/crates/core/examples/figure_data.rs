//! Writes the data bundle of one or more figures.
//!
//! `cargo run --release --example figure_data -- spectrum check out/`

use schrodinger_newton::io::Format;
use schrodinger_newton::scenario::{figure_scenario, Bundle, Figure, Perturbation};

fn main() -> schrodinger_newton::Result<()> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    let dir = match args.last() {
        Some(a) if a.parse::<Figure>().is_err() => args.pop().unwrap_or_default(),
        _ => "figures".into(),
    };
    let figures = if args.is_empty() { Figure::ALL.to_vec() } else { args.iter().map(|a| a.parse()).collect::<Result<_, _>>()? };
    for figure in figures {
        let mut bundle = Bundle::new(&dir, Format::Csv)?;
        figure_scenario(figure, Perturbation::default(), &mut bundle)?;
        println!("{figure}: {}", serde_json::Value::Object(bundle.headline().clone()));
    }
    Ok(())
}
