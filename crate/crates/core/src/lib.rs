//! Numerical laboratory for the spherically symmetric Schrödinger–Newton system.
//!
//! Two models of a self-gravitating quantum wavepacket live side by side:
//!
//! * [`variational`]: a Gaussian ansatz whose width `R(t)` moves like a
//!   particle in the pseudo-potential `U(R) = 1/(2R²) − C/R`.
//! * [`radialpde`]: the full time-dependent equations for `u(r) = rΨ(r)` on a
//!   uniform radial grid, propagated with a self-consistent Crank–Nicolson
//!   scheme.
//!
//! [`groundstate`] relaxes the stationary state by imaginary-time
//! propagation, [`analysis`] turns observable series into spectra and shape
//! diagnostics, [`units`] converts to SI and builds the mass–radius diagram,
//! and [`scenario`] wires everything into reproducible figure pipelines used
//! by the `snlab` binary.
//!
//! Everything except [`units`] works in gravitational atomic units
//! (`ħ = G = m = 1`), where the equations carry no free parameter.

pub mod analysis;
pub mod error;
pub mod groundstate;
pub mod io;
pub mod manifest;
pub mod quadrature;
pub mod radialpde;
pub mod scenario;
pub mod tridiagonal;
pub mod units;
pub mod variational;

pub use error::{Error, Result};
