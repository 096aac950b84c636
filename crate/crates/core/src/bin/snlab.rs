//! Command-line front end. Each subcommand writes its outputs and one
//! manifest into `--out-dir`, and prints a JSON summary on stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use schrodinger_newton::analysis::{dominant_frequency, gaussianity, Window};
use schrodinger_newton::groundstate::{solve_ground_state, GroundStateConfig};
use schrodinger_newton::io::{
    ground_state_table, read_density, read_series, read_state, snapshot_table, trajectory_table, write_json, Format,
    Table,
};
use schrodinger_newton::manifest::RunManifest;
use schrodinger_newton::radialpde::{build_grid, evolve, gaussian_wavefunction, EvolveConfig};
use schrodinger_newton::scenario::{convergence_report, figure_scenario, Bundle, Figure, Perturbation, Study};
use schrodinger_newton::units::{mass_radius_diagram, GOLD_NUMBER_DENSITY};
use schrodinger_newton::variational::{equilibrium_width, integrate, IntegrationConfig, ModelConstants, VariationalState};
use schrodinger_newton::{Error, Result};

#[derive(Parser)]
#[command(name = "snlab", version, about = "Schrödinger–Newton numerical lab")]
struct Cli {
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Seed for radial-noise perturbations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relax to the ground state in imaginary time.
    Ground(GroundArgs),
    /// Real-time evolution of the full radial equations.
    Evolve(EvolveArgs),
    /// Integrate the Gaussian width model.
    Variational(VariationalArgs),
    /// Spectrum of one channel of a series file.
    Spectrum(SpectrumArgs),
    /// Distance of a profile's density from its equal-width Gaussian.
    Gaussianity(GaussianityArgs),
    /// Critical and constant-density radii against mass, in SI units.
    Massradius(MassRadiusArgs),
    /// Regenerate the data of one figure.
    Figure {
        #[arg(value_parser = parse_figure)]
        name: Figure,
    },
    /// Refinement study measuring an observed order of accuracy.
    Converge(ConvergeArgs),
}

#[derive(Args)]
struct GroundArgs {
    #[arg(long, default_value_t = 40.0)]
    rmax: f64,
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 50_000)]
    max_iter: usize,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvolveArgs {
    /// `gaussian`, or a state file written by `ground` or a snapshot.
    #[arg(long, default_value = "gaussian")]
    init: String,
    /// Gaussian width; defaults to the equilibrium width.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    #[arg(long, default_value_t = 100.0)]
    t_end: f64,
    #[arg(long, default_value_t = 40.0)]
    rmax: f64,
    #[arg(long, default_value_t = 4000)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    sample_every: usize,
    /// Stretch the initial state by a factor `1 + perturb`.
    #[arg(long)]
    perturb: Option<f64>,
    /// Relative amplitude of seeded radial noise added to the initial state.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    no_gravity: bool,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct VariationalArgs {
    #[command(subcommand)]
    action: Option<VariationalAction>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    rdot0: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 100.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-8)]
    energy_tol: f64,
    #[arg(long, default_value_t = 10)]
    sample_every: usize,
}

#[derive(Subcommand)]
enum VariationalAction {
    /// Print the model constants as JSON.
    Info,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "rms")]
    channel: String,
    #[arg(long, default_value = "hann")]
    window: Window,
    /// Ignore frequencies below this; defaults to the first two bins.
    #[arg(long)]
    exclude_below: Option<f64>,
}

#[derive(Args)]
struct GaussianityArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct MassRadiusArgs {
    /// Number density in m⁻³.
    #[arg(long, default_value_t = GOLD_NUMBER_DENSITY)]
    density: f64,
    #[arg(long, default_value_t = 1e6)]
    mass_min: f64,
    #[arg(long, default_value_t = 1e13)]
    mass_max: f64,
    #[arg(long, default_value_t = 141)]
    points: usize,
    /// Write the intersection here instead of stderr.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    /// `cn-dt`, `cn-dr`, `poisson`, `verlet` or `all`.
    #[arg(long, default_value = "all")]
    study: String,
    #[arg(long, default_value_t = 4)]
    levels: usize,
}

fn parse_figure(s: &str) -> std::result::Result<Figure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Run<'a> {
    out_dir: &'a Path,
    format: Format,
    seed: Option<u64>,
    manifest: RunManifest,
}

impl Run<'_> {
    fn table(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let path = self.out_dir.join(format!("{stem}.{}", self.format.extension()));
        table.save(&path, self.format)?;
        self.manifest.output(&path);
        Ok(path)
    }

    /// Profiles and states stay CSV whatever the format, since other
    /// subcommands read them back.
    fn csv(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let path = self.out_dir.join(format!("{stem}.csv"));
        table.save(&path, Format::Csv)?;
        self.manifest.output(&path);
        Ok(path)
    }

    fn json(&mut self, stem: &str, value: &Value) -> Result<PathBuf> {
        let path = self.out_dir.join(format!("{stem}.json"));
        write_json(&path, value)?;
        self.manifest.output(&path);
        Ok(path)
    }
}

fn ground(run: &mut Run, args: &GroundArgs) -> Result<Value> {
    run.manifest.parameter("rmax", args.rmax);
    run.manifest.parameter("n", args.n);
    run.manifest.parameter("tol", args.tol);
    let grid = build_grid(args.rmax, args.n)?;
    let config = GroundStateConfig { tol: args.tol, max_iter: args.max_iter, ..Default::default() };
    let gs = solve_ground_state(&grid, &config)?;
    run.csv("ground_state", &ground_state_table(&gs.psi, &gs.potential))?;
    let summary = json!({
        "E0": gs.eigenvalue,
        "E_total": gs.total_energy,
        "K": gs.kinetic,
        "P": gs.interaction,
        "virial_ratio": gs.virial_ratio,
        "iterations": gs.iterations,
        "residual": gs.residual,
    });
    run.manifest.diagnostic("residual", gs.residual);
    run.json("ground", &summary)?;
    Ok(summary)
}

fn evolve_command(run: &mut Run, args: &EvolveArgs) -> Result<Value> {
    let mut psi = if args.init == "gaussian" {
        let grid = build_grid(args.rmax, args.n)?;
        let width = args.r.unwrap_or_else(equilibrium_width);
        let (psi, warning) = gaussian_wavefunction(&grid, width)?;
        if let Some(w) = warning {
            log::warn!("{w:?}");
            run.manifest.diagnostic("initial_warning", format!("{w:?}"));
        }
        run.manifest.parameter("r", width);
        run.manifest.parameter("rmax", args.rmax);
        run.manifest.parameter("n", args.n);
        psi
    } else {
        read_state(Path::new(&args.init))?
    };
    if let Some(delta) = args.perturb {
        psi = Perturbation::Dilation(delta).apply(&psi)?;
    }
    if let Some(amplitude) = args.noise {
        let seed = run.seed.unwrap_or(0);
        psi = Perturbation::Noise { amplitude, seed }.apply(&psi)?;
    }
    for (k, v) in [("dt", args.dt), ("t_end", args.t_end)] {
        run.manifest.parameter(k, v);
    }
    run.manifest.parameter("init", &args.init);
    run.manifest.parameter("perturb", args.perturb);
    run.manifest.parameter("noise", args.noise);
    run.manifest.parameter("gravity", !args.no_gravity);

    let config = EvolveConfig {
        dt: args.dt,
        t_end: args.t_end,
        sample_every: args.sample_every,
        snapshot_times: args.snapshots.clone(),
        gravity: !args.no_gravity,
    };
    let result = match evolve(&psi, &config) {
        Ok(result) => result,
        Err(Error::Evolution { time, source, partial }) => {
            run.table("evolve_series", &Table::from_series(&partial))?;
            run.manifest.diagnostic("partial_outputs", true);
            return Err(Error::Evolution { time, source, partial });
        }
        Err(e) => return Err(e),
    };
    run.table("evolve_series", &Table::from_series(&result.series))?;
    for s in &result.snapshots {
        run.csv(&format!("evolve_snapshot_t{}", s.t), &snapshot_table(&s.psi, &s.potential))?;
    }
    let drift = result.series.channel("E_total").map(schrodinger_newton::analysis::relative_drift);
    run.manifest.diagnostic("energy_drift", drift);
    run.manifest.diagnostic("boundary_contamination", result.boundary_contamination);
    run.manifest.diagnostic("max_outer_mass", result.max_outer_mass);
    Ok(json!({
        "samples": result.series.len(),
        "snapshots": result.snapshots.len(),
        "energy_drift": drift,
        "boundary_contamination": result.boundary_contamination,
    }))
}

fn variational(run: &mut Run, args: &VariationalArgs) -> Result<Value> {
    if let Some(VariationalAction::Info) = args.action {
        run.manifest.command = "variational info".into();
        return Ok(serde_json::to_value(ModelConstants::get())?);
    }
    let r0 = args.r0.unwrap_or_else(equilibrium_width);
    let initial = VariationalState { t: 0.0, r: r0, rdot: args.rdot0 };
    let config = IntegrationConfig {
        dt: args.dt,
        t_end: args.t_end,
        energy_tol: args.energy_tol,
        sample_every: args.sample_every,
        ..Default::default()
    };
    for (k, v) in [("r0", r0), ("rdot0", args.rdot0), ("dt", args.dt), ("t_end", args.t_end)] {
        run.manifest.parameter(k, v);
    }
    let trajectory = match integrate(initial, &config) {
        Ok(t) => t,
        Err(Error::Collapse { time, radius, partial }) => {
            run.table("variational", &trajectory_table(&partial)?)?;
            run.manifest.diagnostic("partial_outputs", true);
            return Err(Error::Collapse { time, radius, partial });
        }
        Err(e) => return Err(e),
    };
    run.table("variational", &trajectory_table(&trajectory)?)?;
    run.manifest.diagnostic("energy_drift", trajectory.energy_drift);
    let last = trajectory.last();
    Ok(json!({ "t": last.t, "R": last.r, "Rdot": last.rdot, "energy_drift": trajectory.energy_drift }))
}

fn spectrum_command(run: &mut Run, args: &SpectrumArgs) -> Result<Value> {
    run.manifest.parameter("input", &args.input);
    run.manifest.parameter("channel", &args.channel);
    run.manifest.parameter("window", args.window.to_string());
    let series = read_series(&args.input)?;
    let spec = series.spectrum(&args.channel, args.window)?;
    let mut table = Table::new(&["omega", "amplitude"]);
    for (w, a) in spec.omega.iter().zip(&spec.amplitude) {
        table.push(vec![*w, *a]);
    }
    run.table("spectrum", &table)?;
    let peak = dominant_frequency(&spec, args.exclude_below)?;
    let summary = json!({ "Omega_peak": peak.omega, "amplitude": peak.amplitude, "resolution": spec.resolution() });
    run.json("spectrum_peak", &summary)?;
    Ok(summary)
}

fn gaussianity_command(run: &mut Run, args: &GaussianityArgs) -> Result<Value> {
    run.manifest.parameter("input", &args.input);
    let (grid, rho) = read_density(&args.input)?;
    let fit = gaussianity(&grid, &rho)?;
    let summary = json!({ "best_R": fit.best_r, "distance": fit.distance });
    run.json("gaussianity", &summary)?;
    Ok(summary)
}

fn massradius(run: &mut Run, args: &MassRadiusArgs) -> Result<Value> {
    run.manifest.parameter("density", args.density);
    run.manifest.parameter("mass_min", args.mass_min);
    run.manifest.parameter("mass_max", args.mass_max);
    run.manifest.parameter("points", args.points);
    let diagram = mass_radius_diagram(args.mass_min, args.mass_max, args.points, args.density)?;
    let mut table = Table::new(&["mass_amu", "r_critical_m", "r_density_m"]);
    for row in &diagram.rows {
        table.push(vec![row.mass_amu, row.r_critical_m, row.r_density_m]);
    }
    run.table("massradius", &table)?;
    let intersection = serde_json::to_value(diagram.intersection)?;
    match &args.meta {
        Some(path) => {
            write_json(path, &intersection)?;
            run.manifest.output(path);
        }
        None => eprintln!("{intersection}"),
    }
    Ok(intersection)
}

fn figure(run: &mut Run, name: Figure) -> Result<Value> {
    run.manifest.command = format!("figure {name}");
    let perturbation = match run.seed {
        Some(seed) => Perturbation::Noise { amplitude: schrodinger_newton::scenario::PERTURBATION, seed },
        None => Perturbation::default(),
    };
    run.manifest.parameter("perturbation", perturbation);
    let mut bundle = Bundle::new(run.out_dir, run.format)?;
    let outcome = figure_scenario(name, perturbation, &mut bundle);
    for f in bundle.files() {
        run.manifest.output(f);
    }
    for (k, v) in bundle.diagnostics() {
        run.manifest.diagnostic(k, v);
    }
    if outcome.is_err() {
        run.manifest.diagnostic("partial_outputs", !bundle.files().is_empty());
    }
    outcome?;
    Ok(Value::Object(bundle.headline().clone()))
}

fn converge(run: &mut Run, args: &ConvergeArgs) -> Result<Value> {
    let studies = if args.study == "all" { Study::ALL.to_vec() } else { vec![args.study.parse()?] };
    run.manifest.parameter("levels", args.levels);
    run.manifest.parameter("study", &args.study);
    let mut summary = serde_json::Map::new();
    for study in studies {
        let report = convergence_report(study, args.levels)?;
        run.table(&format!("converge_{study}"), &report.table())?;
        let value = serde_json::to_value(&report)?;
        run.json(&format!("converge_{study}"), &value)?;
        summary.insert(
            study.to_string(),
            json!({ "observed_order": report.observed_order, "conclusive": report.conclusive, "within_band": report.within_band }),
        );
    }
    run.manifest.diagnostic("orders", &summary);
    Ok(Value::Object(summary))
}

fn dispatch(run: &mut Run, command: &Command) -> Result<Value> {
    match command {
        Command::Ground(a) => ground(run, a),
        Command::Evolve(a) => evolve_command(run, a),
        Command::Variational(a) => variational(run, a),
        Command::Spectrum(a) => spectrum_command(run, a),
        Command::Gaussianity(a) => gaussianity_command(run, a),
        Command::Massradius(a) => massradius(run, a),
        Command::Figure { name } => figure(run, *name),
        Command::Converge(a) => converge(run, a),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Ground(_) => "ground",
        Command::Evolve(_) => "evolve",
        Command::Variational(_) => "variational",
        Command::Spectrum(_) => "spectrum",
        Command::Gaussianity(_) => "gaussianity",
        Command::Massradius(_) => "massradius",
        Command::Figure { .. } => "figure",
        Command::Converge(_) => "converge",
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = std::fs::create_dir_all(&cli.out_dir) {
        eprintln!("error: cannot create {}: {e}", cli.out_dir.display());
        return ExitCode::from(2);
    }
    let args: Vec<String> = std::env::args().collect();
    let mut run = Run {
        out_dir: &cli.out_dir,
        format: cli.format,
        seed: cli.seed,
        manifest: RunManifest::start(command_name(&cli.command), args, cli.seed),
    };
    run.manifest.parameter("format", cli.format);

    let outcome = dispatch(&mut run, &cli.command);
    run.manifest.finish(outcome.as_ref().map(|_| ()));
    if let Err(e) = run.manifest.write(&cli.out_dir) {
        eprintln!("error: writing manifest: {e}");
    }
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
