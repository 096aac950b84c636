//! Canned pipelines that regenerate each figure's data, and refinement
//! studies that measure observed convergence orders.
//!
//! Every pipeline writes plot-ready tables into a [`Bundle`] plus a
//! `<figure>_headline.json` holding the numbers worth quoting.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::thread;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::{closest_gaussian, dominant_frequency, gaussianity, relative_drift, GaussianFit, Window};
use crate::error::{Error, Result};
use crate::groundstate::{solve_ground_state, GroundStateConfig, GroundStateResult};
use crate::io::{ground_state_table, write_json, Format, Table};
use crate::radialpde::{
    build_grid, evolve, gaussian_density, gaussian_wavefunction, mean_square_radius, solve_poisson, CrankNicolson,
    EvolveConfig, Evolution, RadialGrid, RadialWavefunction,
};
use crate::units::{critical_mass_amu, mass_radius_diagram, GOLD_NUMBER_DENSITY};
use crate::variational::{
    acceleration, classify_regime, critical_width, equilibria, equilibrium_width, fit_asymptotic_exponent, integrate,
    linear_frequency, linear_frequency_from_curvature, pseudo_potential, IntegrationConfig, Regime, VariationalState,
    VariationalTrajectory, DEFAULT_REGIME_EPSILON,
};

/// `(r_max, n)` for bound runs.
pub const BOUND_GRID: (f64, usize) = (40.0, 4000);
/// `(r_max, n)` for the free-expansion run; smaller boxes reflect the
/// outgoing halo back into the profile before `t = 200`.
pub const EXPANSION_GRID: (f64, usize) = (800.0, 16000);
pub const PDE_DT: f64 = 0.05;
pub const PDE_SAMPLE_EVERY: usize = 10;
/// Relative width change used to kick the ground state.
pub const PERTURBATION: f64 = 1e-3;
pub const OSCILLATION_T_END: f64 = 2000.0;
pub const PROFILE_TIME: f64 = 500.0;
/// Initial width of the expansion run, in units of the equilibrium width.
pub const EXPANSION_START: f64 = 0.3;
pub const EXPANSION_TIME: f64 = 200.0;
/// Normalised `L²` distance under which a profile counts as Gaussian.
pub const GAUSSIANITY_THRESHOLD: f64 = 0.15;
pub const REGIME_T_END: f64 = 1e4;
pub const REGIME_SAMPLE_EVERY: usize = 1000;
/// Starting at half the critical width the width is accelerated hard
/// before coasting; Verlet at `dt = 1e-3` drifts about 2e-7 there.
pub const REGIME_ENERGY_TOL: f64 = 1e-6;
/// Late-time share of the log-time span used for exponent fits.
pub const FIT_WINDOW: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Poten,
    Density,
    Spectrum,
    Radius,
    Check,
    Expansion,
    MassRadius,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Poten,
        Figure::Density,
        Figure::Spectrum,
        Figure::Radius,
        Figure::Check,
        Figure::Expansion,
        Figure::MassRadius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Poten => "poten",
            Figure::Density => "density",
            Figure::Spectrum => "spectrum",
            Figure::Radius => "radius",
            Figure::Check => "check",
            Figure::Expansion => "expansion",
            Figure::MassRadius => "massradius",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown figure `{s}`")))
    }
}

/// How the ground state is disturbed before a small-oscillation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Perturbation {
    /// Stretch the profile by `1 + δ`.
    Dilation(f64),
    /// Smooth random radial modulation of relative size `amplitude`.
    Noise { amplitude: f64, seed: u64 },
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation::Dilation(PERTURBATION)
    }
}

impl Perturbation {
    pub fn apply(&self, psi: &RadialWavefunction) -> Result<RadialWavefunction> {
        match *self {
            Perturbation::Dilation(delta) => psi.dilated(1.0 + delta),
            Perturbation::Noise { amplitude, seed } => psi.with_radial_noise(amplitude, seed),
        }
    }
}

/// Output directory plus a record of everything written into it.
#[derive(Debug)]
pub struct Bundle {
    dir: PathBuf,
    format: Format,
    files: Vec<PathBuf>,
    headline: Map<String, Value>,
    diagnostics: Map<String, Value>,
}

impl Bundle {
    pub fn new(dir: impl Into<PathBuf>, format: Format) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, format, files: Vec::new(), headline: Map::new(), diagnostics: Map::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn headline(&self) -> &Map<String, Value> {
        &self.headline
    }

    pub fn diagnostics(&self) -> &Map<String, Value> {
        &self.diagnostics
    }

    pub fn table(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let path = self.dir.join(format!("{stem}.{}", self.format.extension()));
        table.save(&path, self.format)?;
        self.files.push(path.clone());
        Ok(path)
    }

    pub fn json(&mut self, stem: &str, value: &impl Serialize) -> Result<PathBuf> {
        let path = self.dir.join(format!("{stem}.json"));
        write_json(&path, value)?;
        self.files.push(path.clone());
        Ok(path)
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        self.headline.insert(key.into(), to_value(value));
    }

    pub fn diagnose(&mut self, key: &str, value: impl Serialize) {
        self.diagnostics.insert(key.into(), to_value(value));
    }

    /// Records drift and boundary diagnostics of a PDE run under `label`.
    pub fn diagnose_evolution(&mut self, label: &str, run: &Evolution) {
        let drift = run.series.channel("E_total").map(relative_drift);
        self.diagnose(
            label,
            json!({
                "energy_drift": drift,
                "norm_drift": run.series.channel("norm").map(|n| n.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max)),
                "boundary_contamination": run.boundary_contamination,
                "max_outer_mass": run.max_outer_mass,
            }),
        );
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

/// Runs the pipeline for `figure`, writing into `bundle`. Files written
/// before a failure stay listed in the bundle.
pub fn figure_scenario(figure: Figure, perturbation: Perturbation, bundle: &mut Bundle) -> Result<()> {
    match figure {
        Figure::Poten => poten(bundle)?,
        Figure::Density => density(bundle)?,
        Figure::Spectrum => spectrum(bundle, perturbation)?,
        Figure::Radius => radius(bundle)?,
        Figure::Check => check(bundle)?,
        Figure::Expansion => expansion(bundle)?,
        Figure::MassRadius => massradius(bundle)?,
    }
    let headline = Value::Object(bundle.headline.clone());
    bundle.json(&format!("{figure}_headline"), &headline)?;
    Ok(())
}

fn poten(bundle: &mut Bundle) -> Result<()> {
    let (r0, r1) = equilibria();
    let mut widths: Vec<f64> = (1..=400).map(|i| 0.05 * i as f64).collect();
    widths.extend([r0, r1]);
    widths.sort_by(f64::total_cmp);

    let mut table = Table::new(&["R", "U", "acceleration"]);
    for &r in &widths {
        table.push(vec![r, pseudo_potential(r)?, acceleration(r)?]);
    }
    bundle.table("poten", &table)?;
    bundle.record("R0", r0);
    bundle.record("R1", r1);
    bundle.record("U_R0", pseudo_potential(r0)?);
    bundle.record("U_R1", pseudo_potential(r1)?);
    bundle.record("Omega_curvature", linear_frequency_from_curvature());
    Ok(())
}

/// Ground state on the bound-run grid with default relaxation settings.
pub fn default_ground_state() -> Result<GroundStateResult> {
    solve_ground_state(&build_grid(BOUND_GRID.0, BOUND_GRID.1)?, &GroundStateConfig::default())
}

fn density(bundle: &mut Bundle) -> Result<()> {
    let gs = default_ground_state()?;
    let grid = *gs.psi.grid();
    let rho = gs.psi.density();
    let r1 = equilibrium_width();

    let mut table = Table::new(&["r", "rho", "rho_gauss", "V"]);
    for (i, &d) in rho.iter().enumerate() {
        table.push(vec![grid.r(i), d, gaussian_density(grid.r(i), r1), gs.potential.values()[i]]);
    }
    bundle.table("density", &table)?;
    bundle.table("density_state", &ground_state_table(&gs.psi, &gs.potential))?;

    bundle.record("E0", gs.eigenvalue);
    bundle.record("E_total", gs.total_energy);
    bundle.record("K", gs.kinetic);
    bundle.record("P", gs.interaction);
    bundle.record("virial_ratio", gs.virial_ratio);
    bundle.record("iterations", gs.iterations);
    bundle.record("E0_var", crate::variational::variational_eigenvalue());
    bundle.record("gaussian_distance_R1", crate::analysis::gaussian_distance(&grid, &rho, r1)?);
    bundle.record("gaussianity", gaussianity(&grid, &rho)?);
    bundle.diagnose("relaxation", json!({ "residual": gs.residual, "dtau": gs.dtau }));
    Ok(())
}

fn oscillation_config(snapshot_times: Vec<f64>) -> EvolveConfig {
    EvolveConfig {
        dt: PDE_DT,
        t_end: OSCILLATION_T_END,
        sample_every: PDE_SAMPLE_EVERY,
        snapshot_times,
        gravity: true,
    }
}

fn spectrum(bundle: &mut Bundle, perturbation: Perturbation) -> Result<()> {
    let gs = default_ground_state()?;
    let psi = perturbation.apply(&gs.psi)?;
    let run = evolve(&psi, &oscillation_config(Vec::new()))?;
    bundle.diagnose_evolution("evolution", &run);
    bundle.table("spectrum_series", &Table::from_series(&run.series))?;

    let spec = run.series.spectrum("rms", Window::Hann)?;
    let mut table = Table::new(&["omega", "amplitude"]);
    for (w, a) in spec.omega.iter().zip(&spec.amplitude) {
        table.push(vec![*w, *a]);
    }
    bundle.table("spectrum", &table)?;

    let peak = dominant_frequency(&spec, None)?;
    bundle.record("perturbation", perturbation);
    bundle.record("Omega_peak", peak.omega);
    bundle.record("amplitude", peak.amplitude);
    bundle.record("resolution", spec.resolution());
    bundle.record("Omega_linear", linear_frequency());
    Ok(())
}

fn radius(bundle: &mut Bundle) -> Result<()> {
    let r1 = equilibrium_width();
    let grid = build_grid(BOUND_GRID.0, BOUND_GRID.1)?;
    let (psi, _) = gaussian_wavefunction(&grid, r1)?;
    let run = evolve(&psi, &oscillation_config(Vec::new()))?;
    bundle.diagnose_evolution("evolution", &run);

    // Same sampling interval as the PDE series.
    let dt = 1e-3;
    let every = (PDE_DT * PDE_SAMPLE_EVERY as f64 / dt).round() as usize;
    let config = IntegrationConfig { dt, t_end: OSCILLATION_T_END, sample_every: every, ..Default::default() };
    let model = integrate(VariationalState::at_rest(r1), &config)?;

    let mut table = Table::new(&["t", "rms", "rms_variational"]);
    let rms = run.series.channel("rms").unwrap_or_default();
    for ((t, r), s) in run.series.times().iter().zip(rms).zip(&model.states) {
        // A Gaussian of width R has ⟨r²⟩ = 3R²/2.
        table.push(vec![*t, *r, s.r * 1.5f64.sqrt()]);
    }
    bundle.table("radius", &table)?;

    // The width model sits at its equilibrium here, so only the PDE rings.
    let peak = dominant_frequency(&run.series.spectrum("rms", Window::Hann)?, None)?;
    bundle.record("Omega_peak", peak.omega);
    bundle.record("Omega_linear", linear_frequency());
    bundle.record("relative_to_linear", peak.omega / linear_frequency() - 1.0);
    bundle.diagnose("variational_energy_drift", model.energy_drift);
    Ok(())
}

/// Density profile of a PDE run at one instant, compared with Gaussians.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCheck {
    pub t: f64,
    pub moment: GaussianFit,
    pub closest: GaussianFit,
    pub threshold: f64,
    pub within_threshold: bool,
}

/// Evolves `psi` to `t` and measures how Gaussian the density is there.
pub fn profile_check(psi: &RadialWavefunction, t: f64, dt: f64) -> Result<(ProfileCheck, Evolution)> {
    let config = EvolveConfig {
        dt,
        t_end: t,
        sample_every: PDE_SAMPLE_EVERY,
        snapshot_times: vec![t],
        gravity: true,
    };
    let run = evolve(psi, &config)?;
    let snapshot = run.snapshots.last().ok_or_else(|| Error::Numerical("snapshot missing".into()))?;
    let grid = *snapshot.psi.grid();
    let rho = snapshot.psi.density();
    let moment = gaussianity(&grid, &rho)?;
    let closest = closest_gaussian(&grid, &rho)?;
    let check = ProfileCheck {
        t,
        moment,
        closest,
        threshold: GAUSSIANITY_THRESHOLD,
        within_threshold: moment.distance <= GAUSSIANITY_THRESHOLD,
    };
    Ok((check, run))
}

/// Gaussian of the equilibrium width on the bound-run grid.
pub fn bound_gaussian() -> Result<RadialWavefunction> {
    let grid = build_grid(BOUND_GRID.0, BOUND_GRID.1)?;
    Ok(gaussian_wavefunction(&grid, equilibrium_width())?.0)
}

/// Compressed Gaussian in the wide box used for expansion runs.
pub fn expansion_gaussian() -> Result<RadialWavefunction> {
    let grid = build_grid(EXPANSION_GRID.0, EXPANSION_GRID.1)?;
    Ok(gaussian_wavefunction(&grid, EXPANSION_START * equilibrium_width())?.0)
}

fn profile_table(run: &Evolution, check: &ProfileCheck) -> Table {
    let mut table = Table::new(&["r", "rho", "rho_gauss", "rho_closest"]);
    if let Some(s) = run.snapshots.last() {
        let grid = s.psi.grid();
        for (i, d) in s.psi.density().into_iter().enumerate() {
            let r = grid.r(i);
            table.push(vec![r, d, gaussian_density(r, check.moment.best_r), gaussian_density(r, check.closest.best_r)]);
        }
    }
    table
}

fn join<T>(handle: thread::ScopedJoinHandle<'_, T>) -> T {
    handle.join().unwrap_or_else(|e| std::panic::resume_unwind(e))
}

fn check(bundle: &mut Bundle) -> Result<()> {
    let bound = bound_gaussian()?;
    let expanding = expansion_gaussian()?;
    let (a, b) = thread::scope(|s| {
        let a = s.spawn(|| profile_check(&bound, PROFILE_TIME, PDE_DT));
        let b = s.spawn(|| profile_check(&expanding, EXPANSION_TIME, PDE_DT));
        (join(a), join(b))
    });
    let (bound_check, bound_run) = a?;
    let (expansion_check, expansion_run) = b?;

    bundle.table("check_bound", &profile_table(&bound_run, &bound_check))?;
    bundle.table("check_expansion", &profile_table(&expansion_run, &expansion_check))?;
    bundle.diagnose_evolution("bound", &bound_run);
    bundle.diagnose_evolution("expansion", &expansion_run);
    bundle.record("bound", &bound_check);
    bundle.record("expansion", &expansion_check);
    Ok(())
}

/// One branch of the regime diagram.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeBranch {
    pub initial_width: f64,
    pub regime: Regime,
    pub exponent: Option<f64>,
    pub std_error: Option<f64>,
    pub energy_drift: f64,
    #[serde(skip)]
    pub trajectory: VariationalTrajectory,
}

/// Integrates a width released at rest and, if it expands, fits its
/// late-time power law.
pub fn regime_branch(initial_width: f64) -> Result<RegimeBranch> {
    let initial = VariationalState::at_rest(initial_width);
    let regime = classify_regime(&initial, DEFAULT_REGIME_EPSILON)?;
    let config = IntegrationConfig {
        dt: 1e-3,
        t_end: REGIME_T_END,
        energy_tol: REGIME_ENERGY_TOL,
        sample_every: REGIME_SAMPLE_EVERY,
        ..Default::default()
    };
    let trajectory = integrate(initial, &config)?;
    let fit = match regime {
        Regime::Bound => None,
        _ => Some(fit_asymptotic_exponent(&trajectory, FIT_WINDOW)?),
    };
    Ok(RegimeBranch {
        initial_width,
        regime,
        exponent: fit.map(|f| f.exponent),
        std_error: fit.map(|f| f.std_error),
        energy_drift: trajectory.energy_drift,
        trajectory,
    })
}

/// Branches released at 0.5, 1 and 1.5 critical widths, run concurrently.
pub fn regime_branches() -> Result<[RegimeBranch; 3]> {
    let r0 = critical_width();
    let [a, b, c] = thread::scope(|s| {
        [0.5, 1.0, 1.5].map(|f| s.spawn(move || regime_branch(f * r0))).map(join)
    });
    Ok([a?, b?, c?])
}

fn expansion(bundle: &mut Bundle) -> Result<()> {
    let branches = regime_branches()?;
    let mut table = Table::new(&["t", "R_expanding", "R_critical", "R_bound"]);
    let [a, b, c] = branches.each_ref().map(|br| &br.trajectory.states);
    for ((x, y), z) in a.iter().zip(b).zip(c) {
        table.push(vec![x.t, x.r, y.r, z.r]);
    }
    bundle.table("expansion", &table)?;
    for (label, branch) in ["expanding", "critical", "bound"].iter().zip(&branches) {
        bundle.record(label, branch);
    }
    Ok(())
}

fn massradius(bundle: &mut Bundle) -> Result<()> {
    let diagram = mass_radius_diagram(1e6, 1e13, 141, GOLD_NUMBER_DENSITY)?;
    let mut table = Table::new(&["mass_amu", "r_critical_m", "r_density_m"]);
    for row in &diagram.rows {
        table.push(vec![row.mass_amu, row.r_critical_m, row.r_density_m]);
    }
    bundle.table("massradius", &table)?;
    bundle.record("number_density", diagram.number_density);
    bundle.record("intersection", diagram.intersection);
    bundle.record("critical_mass_amu_at_0.707um", critical_mass_amu(0.707e-6)?);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    /// Crank–Nicolson, refining the time step.
    CnDt,
    /// Crank–Nicolson, refining the grid spacing.
    CnDr,
    /// Poisson solve against the closed-form Gaussian potential.
    Poisson,
    /// Verlet energy drift of the width model.
    Verlet,
}

impl Study {
    pub const ALL: [Study; 4] = [Study::CnDt, Study::CnDr, Study::Poisson, Study::Verlet];

    pub fn name(self) -> &'static str {
        match self {
            Study::CnDt => "cn-dt",
            Study::CnDr => "cn-dr",
            Study::Poisson => "poisson",
            Study::Verlet => "verlet",
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Study::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown convergence study `{s}`")))
    }
}

pub const ORDER_BAND: (f64, f64) = (1.8, 2.2);

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    /// Time step or grid spacing.
    pub step: f64,
    pub value: f64,
    pub error: f64,
    /// Order measured against the previous, coarser level.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub study: Study,
    pub quantity: &'static str,
    pub reference: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    /// Order between the two finest levels, if the errors decrease.
    pub observed_order: Option<f64>,
    /// False when errors fail to decrease monotonically.
    pub conclusive: bool,
    pub within_band: bool,
}

impl ConvergenceReport {
    fn from_levels(study: Study, quantity: &'static str, reference: Option<f64>, levels: Vec<(f64, f64, f64)>) -> Self {
        let mut rows: Vec<ConvergenceRow> =
            levels.iter().map(|&(step, value, error)| ConvergenceRow { step, value, error, order: None }).collect();
        for k in 1..rows.len() {
            let (prev, cur) = (&rows[k - 1], &rows[k]);
            rows[k].order = Some((prev.error / cur.error).ln() / (prev.step / cur.step).ln());
        }
        let conclusive = rows.iter().all(|r| r.error.is_finite() && r.error > 0.0)
            && rows.windows(2).all(|w| w[1].error < w[0].error);
        let observed_order = if conclusive { rows.last().and_then(|r| r.order) } else { None };
        let within_band = observed_order.is_some_and(|p| (ORDER_BAND.0..=ORDER_BAND.1).contains(&p));
        Self { study, quantity, reference, rows, observed_order, conclusive, within_band }
    }

    pub fn table(&self) -> Table {
        let mut table = Table::new(&["step", "value", "error", "order"]);
        for r in &self.rows {
            table.push(vec![r.step, r.value, r.error, r.order.unwrap_or(f64::NAN)]);
        }
        table
    }
}

const STUDY_T_END_DT: f64 = 10.0;
const STUDY_T_END_DR: f64 = 5.0;
const STUDY_R_MAX: f64 = 40.0;

fn mean_square_radius_at(grid: RadialGrid, dt: f64, t_end: f64) -> Result<f64> {
    let (mut psi, _) = gaussian_wavefunction(&grid, equilibrium_width())?;
    let mut propagator = CrankNicolson::new(grid, dt)?;
    for _ in 0..(t_end / dt).round() as usize {
        propagator.step(&mut psi)?;
    }
    Ok(mean_square_radius(&psi))
}

/// Largest relative deviation of the discrete potential of a Gaussian
/// from `−erf(r/R)/r`.
pub fn poisson_error(n: usize, r_max: f64, width: f64) -> Result<f64> {
    let grid = build_grid(r_max, n)?;
    let rho: Vec<f64> = grid.points().iter().map(|&r| gaussian_density(r, width)).collect();
    let v = solve_poisson(&grid, &rho)?;
    Ok(grid
        .points()
        .iter()
        .zip(v.values())
        .map(|(&r, &v)| {
            let exact = -libm::erf(r / width) / r;
            ((v - exact) / exact).abs()
        })
        .fold(0.0, f64::max))
}

/// Refines the discretisation of `study` over `levels` halvings and
/// measures the observed order of accuracy.
///
/// The PDE studies follow `⟨r²⟩` of a Gaussian of the equilibrium width
/// (a bound, oscillating state) and measure errors against a run eight
/// times finer than the finest level.
pub fn convergence_report(study: Study, levels: usize) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::domain(format!("a convergence study needs at least 3 levels, got {levels}")));
    }
    let halvings = || (0..levels).map(|k| 2f64.powi(k as i32));
    match study {
        Study::CnDt => {
            let grid = build_grid(STUDY_R_MAX, 1000)?;
            let coarse = 0.4;
            let finest = coarse / 2f64.powi(levels as i32 - 1);
            let reference = mean_square_radius_at(grid, finest / 8.0, STUDY_T_END_DT)?;
            let rows = halvings()
                .map(|h| {
                    let dt = coarse / h;
                    let v = mean_square_radius_at(grid, dt, STUDY_T_END_DT)?;
                    Ok((dt, v, (v - reference).abs()))
                })
                .collect::<Result<_>>()?;
            Ok(ConvergenceReport::from_levels(study, "mean_square_radius", Some(reference), rows))
        }
        Study::CnDr => {
            let dt = 0.01;
            let coarse = 250usize;
            let finest = coarse << (levels - 1);
            let reference = mean_square_radius_at(build_grid(STUDY_R_MAX, finest * 8)?, dt, STUDY_T_END_DR)?;
            let rows = (0..levels)
                .map(|k| {
                    let grid = build_grid(STUDY_R_MAX, coarse << k)?;
                    let v = mean_square_radius_at(grid, dt, STUDY_T_END_DR)?;
                    Ok((grid.dr(), v, (v - reference).abs()))
                })
                .collect::<Result<_>>()?;
            Ok(ConvergenceReport::from_levels(study, "mean_square_radius", Some(reference), rows))
        }
        Study::Poisson => {
            let rows = (0..levels)
                .map(|k| {
                    let n = 500usize << k;
                    let e = poisson_error(n, STUDY_R_MAX, equilibrium_width())?;
                    Ok((STUDY_R_MAX / n as f64, e, e))
                })
                .collect::<Result<_>>()?;
            Ok(ConvergenceReport::from_levels(study, "max_relative_potential_error", None, rows))
        }
        Study::Verlet => {
            let initial = VariationalState::at_rest(1.5 * critical_width());
            let rows = halvings()
                .map(|h| {
                    let dt = 0.08 / h;
                    let config = IntegrationConfig { dt, t_end: 100.0, energy_tol: 1.0, sample_every: 1000, ..Default::default() };
                    let drift = integrate(initial, &config)?.energy_drift;
                    Ok((dt, drift, drift))
                })
                .collect::<Result<_>>()?;
            Ok(ConvergenceReport::from_levels(study, "relative_energy_drift", None, rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        for s in Study::ALL {
            assert_eq!(s.name().parse::<Study>().unwrap(), s);
        }
        assert!("fig8".parse::<Figure>().is_err());
    }

    #[test]
    fn poten_tabulates_the_zero_crossing() {
        let dir = tempfile::tempdir().unwrap();
        let mut bundle = Bundle::new(dir.path(), Format::Csv).unwrap();
        figure_scenario(Figure::Poten, Perturbation::default(), &mut bundle).unwrap();
        let table = Table::read_csv(&dir.path().join("poten.csv")).unwrap();
        let (r, u) = (table.column("R").unwrap(), table.column("U").unwrap());
        let i = r.iter().position(|&x| x == critical_width()).unwrap();
        assert!(u[i].abs() < 1e-15);
        assert_eq!(bundle.files().len(), 2);
    }

    #[test]
    fn regime_branches_classify_and_fit() {
        let [a, b, c] = regime_branches().unwrap();
        assert_eq!((a.regime, b.regime, c.regime), (Regime::Expanding, Regime::Critical, Regime::Bound));
        assert!((a.exponent.unwrap() - 1.0).abs() <= 0.02);
        assert!((b.exponent.unwrap() - 2.0 / 3.0).abs() <= 0.02);
        assert!(c.exponent.is_none());
    }

    #[test]
    fn too_few_levels_is_a_usage_error() {
        assert_eq!(convergence_report(Study::Poisson, 2).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn non_monotone_errors_are_inconclusive() {
        let r = ConvergenceReport::from_levels(Study::Poisson, "x", None, vec![(1.0, 0.0, 1e-2), (0.5, 0.0, 2e-2), (0.25, 0.0, 1e-3)]);
        assert!(!r.conclusive && r.observed_order.is_none() && !r.within_band);
    }
}
