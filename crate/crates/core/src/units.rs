//! Gravitational atomic units and the mass–radius criticality diagram.
//!
//! With `ħ = G = m = 1` the natural scales are the gravitational Bohr radius
//! `a_G = ħ²/(G m³)`, the energy `E_G = m⁵G²/ħ²` and the time `t_G = ħ/E_G`.
//! This is the only module that handles SI quantities.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::variational::equilibrium_width;

/// CODATA 2018 reduced Planck constant, J·s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// CODATA 2018 Newtonian constant of gravitation, m³·kg⁻¹·s⁻².
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// CODATA 2018 atomic mass constant, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Typical number density of gold and similar metal clusters, m⁻³.
pub const GOLD_NUMBER_DENSITY: f64 = 5.0e28;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    mass: f64,
    hbar: f64,
    gravity: f64,
    length: f64,
    energy: f64,
    time: f64,
}

impl UnitSystem {
    pub fn new(mass: f64, hbar: f64, gravity: f64) -> Result<Self> {
        for (name, value) in [("mass", mass), ("hbar", hbar), ("G", gravity)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {value}")));
            }
        }
        let length = hbar * hbar / (gravity * mass.powi(3));
        let energy = mass.powi(5) * gravity * gravity / (hbar * hbar);
        let time = hbar / energy;
        Ok(Self { mass, hbar, gravity, length, energy, time })
    }

    /// Unit system for a body of `mass` kilograms with CODATA ħ and G.
    pub fn physical(mass: f64) -> Result<Self> {
        Self::new(mass, HBAR, GRAVITATIONAL_CONSTANT)
    }

    pub fn from_amu(mass_amu: f64) -> Result<Self> {
        Self::physical(mass_amu * ATOMIC_MASS_UNIT)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn gravitational_constant(&self) -> f64 {
        self.gravity
    }

    /// Gravitational Bohr radius `a_G`, metres.
    pub fn bohr_radius(&self) -> f64 {
        self.length
    }

    /// Gravitational Hartree `E_G`, joules.
    pub fn hartree(&self) -> f64 {
        self.energy
    }

    /// `t_G = ħ/E_G`, seconds.
    pub fn time_unit(&self) -> f64 {
        self.time
    }

    /// The SI size of one dimensionless unit of `kind`.
    pub fn scale(&self, kind: Quantity) -> f64 {
        match kind {
            Quantity::Length => self.length,
            Quantity::Time => self.time,
            Quantity::Energy => self.energy,
            Quantity::MassDensity => self.mass / self.length.powi(3),
        }
    }

    pub fn to_dimensionless(&self, value: f64, kind: Quantity) -> f64 {
        value / self.scale(kind)
    }

    pub fn to_physical(&self, value: f64, kind: Quantity) -> f64 {
        value * self.scale(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Length,
    Time,
    Energy,
    MassDensity,
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "length" => Ok(Quantity::Length),
            "time" => Ok(Quantity::Time),
            "energy" => Ok(Quantity::Energy),
            "mass-density" | "density" => Ok(Quantity::MassDensity),
            other => Err(Error::domain(format!("unknown quantity kind `{other}`"))),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Length => "length",
            Quantity::Time => "time",
            Quantity::Energy => "energy",
            Quantity::MassDensity => "mass-density",
        })
    }
}

/// Radius (m) below which a body of `mass` (kg) contracts under its own
/// gravity from rest: `R m³ = R₁ ħ²/G` with `R₁ = (3/2)√(2π) ≈ 3.76`.
pub fn critical_radius(mass: f64, hbar: f64, gravity: f64) -> f64 {
    equilibrium_width() * hbar * hbar / (gravity * mass.powi(3))
}

/// Inverse of [`critical_radius`]: the mass (kg) whose critical radius is
/// `radius` metres.
pub fn critical_mass(radius: f64, hbar: f64, gravity: f64) -> Result<f64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    if !(hbar > 0.0 && gravity > 0.0) {
        return Err(Error::domain("hbar and G must be positive"));
    }
    Ok((equilibrium_width() * hbar * hbar / (gravity * radius)).cbrt())
}

/// [`critical_mass`] with CODATA constants, in atomic mass units.
pub fn critical_mass_amu(radius: f64) -> Result<f64> {
    Ok(critical_mass(radius, HBAR, GRAVITATIONAL_CONSTANT)? / ATOMIC_MASS_UNIT)
}

/// Radius (m) of a homogeneous body of `mass_amu` at `number_density` (m⁻³),
/// using the convention `m[amu]/R³ = n`.
pub fn constant_density_radius(mass_amu: f64, number_density: f64) -> f64 {
    (mass_amu / number_density).cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassRadiusRow {
    pub mass_amu: f64,
    pub r_critical_m: f64,
    pub r_density_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intersection {
    pub mass_amu: f64,
    pub radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassRadiusDiagram {
    pub number_density: f64,
    pub rows: Vec<MassRadiusRow>,
    pub intersection: Intersection,
}

/// Tabulates both curves of the mass–radius diagram on `points` log-spaced
/// masses in `[mass_min_amu, mass_max_amu]`, and locates where they cross.
pub fn mass_radius_diagram(
    mass_min_amu: f64,
    mass_max_amu: f64,
    points: usize,
    number_density: f64,
) -> Result<MassRadiusDiagram> {
    if !(number_density.is_finite() && number_density > 0.0) {
        return Err(Error::domain(format!("density must be positive, got {number_density}")));
    }
    if !(mass_min_amu > 0.0 && mass_max_amu.is_finite() && mass_max_amu > mass_min_amu) {
        return Err(Error::domain(format!(
            "mass range must be positive and ascending, got [{mass_min_amu}, {mass_max_amu}]"
        )));
    }
    if points < 2 {
        return Err(Error::domain("mass-radius diagram needs at least two points"));
    }

    let (lo, hi) = (mass_min_amu.ln(), mass_max_amu.ln());
    let rows = (0..points)
        .map(|i| {
            let mass_amu = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
            MassRadiusRow {
                mass_amu,
                r_critical_m: critical_radius(mass_amu * ATOMIC_MASS_UNIT, HBAR, GRAVITATIONAL_CONSTANT),
                r_density_m: constant_density_radius(mass_amu, number_density),
            }
        })
        .collect();

    let intersection = intersect(number_density, lo, hi)?;
    Ok(MassRadiusDiagram { number_density, rows, intersection })
}

/// Bisection on log-mass. The crossing need not lie inside the tabulated
/// range; the bracket is widened by decades until the sign changes.
fn intersect(number_density: f64, mut lo: f64, mut hi: f64) -> Result<Intersection> {
    // log(R_crit / R_density): strictly decreasing in log-mass.
    let gap = |log_mass: f64| {
        let m = log_mass.exp();
        critical_radius(m * ATOMIC_MASS_UNIT, HBAR, GRAVITATIONAL_CONSTANT).ln()
            - constant_density_radius(m, number_density).ln()
    };

    let decade = std::f64::consts::LN_10;
    let mut widen = 0;
    while gap(lo) < 0.0 || gap(hi) > 0.0 {
        if gap(lo) < 0.0 {
            lo -= decade;
        }
        if gap(hi) > 0.0 {
            hi += decade;
        }
        widen += 1;
        if widen > 200 {
            return Err(Error::Numerical("could not bracket the mass-radius intersection".into()));
        }
    }

    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mass_amu = (0.5 * (lo + hi)).exp();
    Ok(Intersection { mass_amu, radius_m: constant_density_radius(mass_amu, number_density) })
}
