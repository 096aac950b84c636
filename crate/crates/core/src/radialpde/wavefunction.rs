use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::RadialGrid;
use crate::error::{Error, Result};

/// Non-fatal conditions noticed while preparing or measuring a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// The Gaussian's mass beyond `r_max` exceeds `1e-8`.
    TruncatedGaussian { norm_deficit: f64 },
    /// The state was measured with a norm away from one.
    Unnormalized { norm: f64 },
}

/// Reduced amplitude `u_j ≈ r_j Ψ(r_j)`. The outermost node is the
/// Dirichlet boundary and is held at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWavefunction {
    grid: RadialGrid,
    u: Vec<Complex64>,
}

impl RadialWavefunction {
    pub fn new(grid: RadialGrid, mut u: Vec<Complex64>) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::domain(format!(
                "wavefunction has {} values for a grid of {}",
                u.len(),
                grid.len()
            )));
        }
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("wavefunction contains non-finite values".into()));
        }
        *u.last_mut().expect("grid is never empty") = Complex64::new(0.0, 0.0);
        Ok(Self { grid, u })
    }

    pub fn from_real(grid: RadialGrid, u: &[f64]) -> Result<Self> {
        Self::new(grid, u.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.u
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.u
    }

    /// `4π ∫ |u|² dr`.
    pub fn norm(&self) -> f64 {
        4.0 * PI * crate::quadrature::trapezoid_by(self.u.len(), self.grid.dr(), |i| self.u[i].norm_sqr())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical(format!("cannot normalise a state of norm {norm}")));
        }
        let scale = norm.sqrt().recip();
        self.u.iter_mut().for_each(|z| *z *= scale);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `|u|²`, the radial density weighted by `r²`.
    pub fn radial_weight(&self) -> Vec<f64> {
        self.u.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `ρ_j = |Ψ(r_j)|² = |u_j|²/r_j²`.
    pub fn density(&self) -> Vec<f64> {
        self.u
            .iter()
            .enumerate()
            .map(|(i, z)| z.norm_sqr() / self.grid.r(i).powi(2))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Mass held in the outer `fraction` of the grid.
    pub fn outer_mass(&self, fraction: f64) -> f64 {
        let start = self.grid.outer_start(fraction);
        4.0 * PI * self.grid.dr() * self.u[start..].iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// The state stretched about the origin by `factor`,
    /// `Ψ(r) → factor^{-3/2} Ψ(r/factor)`, renormalised on the grid.
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::domain(format!("dilation factor must be positive, got {factor}")));
        }
        let dr = self.grid.dr();
        let u: Vec<Complex64> = (0..self.grid.len())
            .map(|i| self.interpolate(self.grid.r(i) / factor / dr) / factor.sqrt())
            .collect();
        Self::new(self.grid, u)?.normalized()
    }

    /// Catmull–Rom interpolation at fractional position `s = r/dr`, using
    /// the odd extension `u(−r) = −u(r)` through the origin.
    fn interpolate(&self, s: f64) -> Complex64 {
        let node = |k: isize| -> Complex64 {
            let value = self.u.get((k.unsigned_abs()).wrapping_sub(1)).copied().unwrap_or_default();
            if k < 0 {
                -value
            } else {
                value
            }
        };
        let k = s.floor() as isize;
        let x = s - k as f64;
        let (p0, p1, p2, p3) = (node(k - 1), node(k), node(k + 1), node(k + 2));
        let x2 = x * x;
        let x3 = x2 * x;
        (p1 * 2.0
            + (p2 - p0) * x
            + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * x2
            + (-p0 + p1 * 3.0 - p2 * 3.0 + p3) * x3)
            * 0.5
    }

    /// Complex conjugate; evolving it forward runs the original backwards.
    pub fn conjugated(&self) -> Self {
        Self { grid: self.grid, u: self.u.iter().map(|z| z.conj()).collect() }
    }

    /// Multiplies the amplitude by a smooth random radial modulation of
    /// relative size `amplitude`, drawn from `seed`, and renormalises.
    pub fn with_radial_noise(&self, amplitude: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<f64> = (1..=4).map(|m| rng.gen_range(-1.0..1.0) / m as f64).collect();
        let r_max = self.grid.r_max();
        let u = self
            .u
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let x = PI * self.grid.r(i) / r_max;
                let modulation: f64 = modes.iter().enumerate().map(|(m, a)| a * ((m + 1) as f64 * x).sin()).sum();
                z * (1.0 + amplitude * modulation)
            })
            .collect();
        Self::new(self.grid, u)?.normalized()
    }
}

/// `ρ(r) = π^{-3/2} R⁻³ exp(−r²/R²)`.
pub fn gaussian_density(r: f64, width: f64) -> f64 {
    (-(r / width).powi(2)).exp() / (PI.powf(1.5) * width.powi(3))
}

/// Mass of the unit Gaussian density lying beyond `r_max`.
fn gaussian_tail_mass(r_max: f64, width: f64) -> f64 {
    let x = r_max / width;
    libm::erfc(x) + 2.0 * x * (-x * x).exp() / PI.sqrt()
}

/// Real Gaussian state `Ψ = √ρ` of width `R`, renormalised on the grid.
pub fn gaussian_wavefunction(grid: &RadialGrid, width: f64) -> Result<(RadialWavefunction, Option<Warning>)> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::domain(format!("Gaussian width must be positive, got {width}")));
    }
    let u: Vec<f64> = (0..grid.len()).map(|i| grid.r(i) * gaussian_density(grid.r(i), width).sqrt()).collect();
    let psi = RadialWavefunction::from_real(*grid, &u)?.normalized()?;
    let deficit = gaussian_tail_mass(grid.r_max(), width);
    let warning = (deficit > 1e-8).then(|| {
        log::warn!("grid r_max = {} truncates the Gaussian of width {width}: lost mass {deficit:e}", grid.r_max());
        Warning::TruncatedGaussian { norm_deficit: deficit }
    });
    Ok((psi, warning))
}
