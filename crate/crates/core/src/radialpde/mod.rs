//! Full spherically symmetric Schrödinger–Newton dynamics.
//!
//! The state is the reduced amplitude `u(r) = rΨ(r)` on a uniform mesh that
//! excludes the origin, with `u(0) = u(r_max) = 0`. The radial Laplacian
//! then becomes the plain second difference of `u`. All integrals use the
//! trapezoid rule of [`crate::quadrature`].

mod grid;
mod observables;
mod poisson;
mod propagate;
mod wavefunction;

pub use grid::{build_grid, RadialGrid};
pub use observables::{energies, interaction_energy, kinetic_energy, mean_square_radius, rms_radius, Energies};
pub use poisson::{potential_of, solve_poisson, RadialPotential};
pub use propagate::{crank_nicolson_step, evolve, CrankNicolson, EvolveConfig, Evolution, Snapshot};
pub use wavefunction::{gaussian_density, gaussian_wavefunction, RadialWavefunction, Warning};

/// Fraction of the grid treated as the outer boundary layer.
pub const BOUNDARY_LAYER: f64 = 0.1;
/// Mass in the boundary layer above which a run is flagged as contaminated.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-6;
