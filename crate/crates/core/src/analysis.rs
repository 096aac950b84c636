//! Post-processing of observable series and densities.
//!
//! Frequencies are angular throughout: bin `k` of an `N`-sample record with
//! spacing `dt` sits at `Ω_k = 2πk/(N·dt)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::trapezoid_by;
use crate::radialpde::{gaussian_density, RadialGrid};

pub const MIN_SPECTRUM_SAMPLES: usize = 64;

/// Uniformly sampled named channels sharing one time axis.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ObservableSeries {
    t: Vec<f64>,
    names: Vec<String>,
    channels: Vec<Vec<f64>>,
}

impl ObservableSeries {
    pub fn new(names: &[&str]) -> Self {
        Self {
            t: Vec::new(),
            names: names.iter().map(|s| s.to_string()).collect(),
            channels: vec![Vec::new(); names.len()],
        }
    }

    /// Builds a series from complete columns, checking shape and sampling.
    pub fn from_columns(t: Vec<f64>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if columns.iter().any(|(_, c)| c.len() != t.len()) {
            return Err(Error::domain("all channels must have the same length as the time axis"));
        }
        let (names, channels) = columns.into_iter().unzip();
        let series = Self { t, names, channels };
        series.check_uniform()?;
        Ok(series)
    }

    pub fn push(&mut self, t: f64, values: &[f64]) -> Result<()> {
        if values.len() != self.channels.len() {
            return Err(Error::domain(format!(
                "expected {} channel values, got {}",
                self.channels.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite observable {v} at t = {t}")));
        }
        self.t.push(t);
        for (c, &v) in self.channels.iter_mut().zip(values) {
            c.push(v);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.channels[i].as_slice())
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names.iter().map(String::as_str).zip(self.channels.iter().map(Vec::as_slice))
    }

    /// Common sample spacing; errors when the axis is not uniform.
    pub fn sample_interval(&self) -> Result<f64> {
        self.check_uniform()
    }

    fn check_uniform(&self) -> Result<f64> {
        if self.t.len() < 2 {
            return Err(Error::domain("series needs at least two samples"));
        }
        let dt = (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64;
        if !(dt > 0.0) {
            return Err(Error::domain("time axis must be strictly increasing"));
        }
        for (i, w) in self.t.windows(2).enumerate() {
            if ((w[1] - w[0]) - dt).abs() > 1e-6 * dt {
                return Err(Error::domain(format!("non-uniform sampling at sample {i}")));
            }
        }
        Ok(dt)
    }

    pub fn spectrum(&self, channel: &str, window: Window) -> Result<Spectrum> {
        let values = self
            .channel(channel)
            .ok_or_else(|| Error::domain(format!("series has no channel `{channel}`")))?;
        spectrum(values, self.sample_interval()?, window)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    None,
    #[default]
    Hann,
}

impl Window {
    fn weight(self, i: usize, n: usize) -> f64 {
        match self {
            Window::None => 1.0,
            Window::Hann => 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos(),
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "rect" => Ok(Window::None),
            "hann" | "hanning" => Ok(Window::Hann),
            other => Err(Error::domain(format!("unknown window `{other}`"))),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::None => "none",
            Window::Hann => "hann",
        })
    }
}

/// One-sided magnitude spectrum on an angular-frequency axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub window: Window,
}

impl Spectrum {
    /// Width of one frequency bin.
    pub fn resolution(&self) -> f64 {
        self.omega.get(1).copied().unwrap_or(0.0)
    }
}

/// Unnormalised forward DFT, `X_k = Σ x_j e^{−2πijk/N}`.
pub fn dft(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Spectrum of a uniformly sampled record after removing its mean and
/// applying `window`. Amplitudes are scaled so a unit sinusoid on a bin
/// centre reads one.
pub fn spectrum(values: &[f64], dt: f64, window: Window) -> Result<Spectrum> {
    let n = values.len();
    if n < MIN_SPECTRUM_SAMPLES {
        return Err(Error::domain(format!("spectrum needs at least {MIN_SPECTRUM_SAMPLES} samples, got {n}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("sample spacing must be positive, got {dt}")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let weights: Vec<f64> = (0..n).map(|i| window.weight(i, n)).collect();
    let gain: f64 = weights.iter().sum();
    let tapered: Vec<f64> = values.iter().zip(&weights).map(|(x, w)| (x - mean) * w).collect();
    let transform = dft(&tapered);

    let bins = n / 2 + 1;
    let step = 2.0 * PI / (n as f64 * dt);
    let omega = (0..bins).map(|k| k as f64 * step).collect();
    let amplitude = transform[..bins]
        .iter()
        .enumerate()
        .map(|(k, z)| z.norm() * if k == 0 { 1.0 } else { 2.0 } / gain)
        .collect();
    Ok(Spectrum { omega, amplitude, window })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub omega: f64,
    pub amplitude: f64,
    pub bin: usize,
}

/// Largest spectral line at or above `exclude_below` (default: skip the
/// first two bins), refined by a three-point parabola through the log
/// magnitudes.
pub fn dominant_frequency(spec: &Spectrum, exclude_below: Option<f64>) -> Result<Peak> {
    let amp = &spec.amplitude;
    let first = match exclude_below {
        Some(omega_min) => spec.omega.iter().position(|&w| w >= omega_min).unwrap_or(amp.len()),
        None => 2,
    };
    let bin = (first..amp.len())
        .max_by(|&a, &b| amp[a].total_cmp(&amp[b]))
        .ok_or_else(|| Error::domain("no spectral bins above the exclusion threshold"))?;

    let mut offset = 0.0;
    let mut amplitude = amp[bin];
    // Refine only a true local maximum; at the edge of the band the
    // arg-max may sit on a slope.
    let local_max = bin > 0 && bin + 1 < amp.len() && amp[bin - 1] <= amp[bin] && amp[bin + 1] <= amp[bin];
    if local_max && amp[bin - 1] > 0.0 && amp[bin + 1] > 0.0 {
        let (a, b, c) = (amp[bin - 1].ln(), amp[bin].ln(), amp[bin + 1].ln());
        let curvature = a - 2.0 * b + c;
        if curvature < 0.0 {
            offset = 0.5 * (a - c) / curvature;
            amplitude = (b - 0.25 * (a - c) * offset).exp();
        }
    }
    let omega = (bin as f64 + offset) * spec.resolution();
    Ok(Peak { omega, amplitude, bin })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFit {
    /// Width of the Gaussian with the same second moment, `√(2⟨r²⟩/3)`.
    pub best_r: f64,
    /// `‖ρ − ρ_G‖ / ‖ρ‖` in the `L²(d³r)` norm.
    pub distance: f64,
}

/// `[4π ∫ w(r) r² dr]`, with `w` given per node.
fn radial_moment(grid: &RadialGrid, f: impl Fn(usize) -> f64) -> f64 {
    4.0 * PI * trapezoid_by(grid.len(), grid.dr(), |i| f(i) * grid.r(i).powi(2))
}

fn check_density(grid: &RadialGrid, density: &[f64]) -> Result<()> {
    if density.len() != grid.len() {
        return Err(Error::domain(format!("density has {} values for a grid of {}", density.len(), grid.len())));
    }
    if density.iter().any(|x| !x.is_finite() || *x < -1e-14) {
        return Err(Error::domain("density must be finite and non-negative"));
    }
    Ok(())
}

/// Normalised `L²` distance between a density and the Gaussian of width `width`.
pub fn gaussian_distance(grid: &RadialGrid, density: &[f64], width: f64) -> Result<f64> {
    check_density(grid, density)?;
    let reference = |i: usize| gaussian_density(grid.r(i), width);
    let diff = radial_moment(grid, |i| (density[i] - reference(i)).powi(2));
    let own = radial_moment(grid, |i| density[i].powi(2));
    if !(own > 0.0) {
        return Err(Error::domain("density has zero norm"));
    }
    Ok((diff / own).sqrt())
}

/// Compares `density` with the Gaussian of equal second moment.
pub fn gaussianity(grid: &RadialGrid, density: &[f64]) -> Result<GaussianFit> {
    check_density(grid, density)?;
    let mass = radial_moment(grid, |i| density[i]);
    if !(mass > 0.0) {
        return Err(Error::domain("density has zero mass"));
    }
    let unit: Vec<f64> = density.iter().map(|x| x / mass).collect();
    let second = radial_moment(grid, |i| unit[i] * grid.r(i).powi(2));
    let best_r = (2.0 * second / 3.0).sqrt();
    Ok(GaussianFit { best_r, distance: gaussian_distance(grid, &unit, best_r)? })
}

/// Gaussian width minimising the `L²` distance, found by golden-section
/// search around the second-moment width. Reported alongside
/// [`gaussianity`], which stays the reference measure.
pub fn closest_gaussian(grid: &RadialGrid, density: &[f64]) -> Result<GaussianFit> {
    let moment = gaussianity(grid, density)?;
    let mass = radial_moment(grid, |i| density[i]);
    let unit: Vec<f64> = density.iter().map(|x| x / mass).collect();
    let cost = |log_width: f64| gaussian_distance(grid, &unit, log_width.exp());

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((moment.best_r / 4.0).ln(), (moment.best_r * 1.5).ln());
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (cost(c)?, cost(d)?);
    while b - a > 1e-9 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = cost(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = cost(d)?;
        }
    }
    let best_r = (0.5 * (a + b)).exp();
    Ok(GaussianFit { best_r, distance: cost(best_r.ln())? })
}

/// Largest deviation from the first value, relative to its magnitude.
pub fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else { return 0.0 };
    let scale = if first != 0.0 { first.abs() } else { 1.0 };
    values.iter().map(|x| (x - first).abs() / scale).fold(0.0, f64::max)
}

/// `|P|/K`; equals 2 for a stationary self-gravitating state.
pub fn virial_ratio(kinetic: f64, potential: f64) -> Result<f64> {
    if !(kinetic > 0.0) {
        return Err(Error::domain(format!("kinetic energy must be positive, got {kinetic}")));
    }
    Ok(potential.abs() / kinetic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radialpde::build_grid;
    use crate::variational::{critical_width, equilibrium_width, gaussian_kinetic_energy, gaussian_potential_energy};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sampled(f: impl Fn(f64) -> f64, dt: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 * dt)).collect()
    }

    #[test]
    fn pure_tone_peaks_within_one_bin() {
        let dt = 0.5;
        let x = sampled(|t| (0.0707 * t).sin(), dt, 4001);
        let spec = spectrum(&x, dt, Window::Hann).unwrap();
        let peak = dominant_frequency(&spec, None).unwrap();
        assert!((peak.omega - 0.0707).abs() < spec.resolution());
    }

    #[test]
    fn constant_record_has_no_spectrum() {
        let spec = spectrum(&[3.25; 128], 1.0, Window::Hann).unwrap();
        assert!(spec.amplitude.iter().all(|&a| a <= 1e-12));
        let spec = spectrum(&[3.25; 128], 1.0, Window::None).unwrap();
        assert!(spec.amplitude.iter().all(|&a| a <= 1e-12));
    }

    #[test]
    fn stronger_of_two_tones_wins() {
        let x = sampled(|t| 0.1 * (0.3 * t).sin() + (0.9 * t).cos(), 0.25, 2048);
        let spec = spectrum(&x, 0.25, Window::Hann).unwrap();
        let peak = dominant_frequency(&spec, None).unwrap();
        assert!((peak.omega - 0.9).abs() < 0.1 * spec.resolution());
        assert_relative_eq!(peak.amplitude, 1.0, max_relative = 0.05);
    }

    #[test]
    fn peak_on_the_band_edge_is_not_extrapolated() {
        let n = 81;
        let x = sampled(|t| (-t / 10.0).exp(), 0.5, n);
        let spec = spectrum(&x, 0.5, Window::Hann).unwrap();
        let peak = dominant_frequency(&spec, None).unwrap();
        assert!(peak.omega >= 2.0 * spec.resolution() - 1e-12 * spec.resolution());
        assert!(peak.omega <= spec.omega[spec.omega.len() - 1]);
    }

    #[test]
    fn exclusion_threshold_skips_low_bins() {
        let x = sampled(|t| (0.05 * t).sin() + 0.2 * (0.5 * t).sin(), 0.5, 4096);
        let spec = spectrum(&x, 0.5, Window::Hann).unwrap();
        let peak = dominant_frequency(&spec, Some(0.2)).unwrap();
        assert!((peak.omega - 0.5).abs() < spec.resolution());
        assert!(dominant_frequency(&spec, Some(100.0)).is_err());
    }

    #[test]
    fn short_or_irregular_records_are_rejected() {
        assert!(spectrum(&[1.0; 63], 1.0, Window::Hann).is_err());
        let mut t: Vec<f64> = (0..100).map(|i| i as f64).collect();
        t[50] += 0.3;
        let series = ObservableSeries::from_columns(t, vec![("x".into(), vec![0.0; 100])]);
        assert!(matches!(series, Err(Error::Domain(_))));
    }

    #[test]
    fn window_names_parse() {
        assert_eq!("hann".parse::<Window>().unwrap(), Window::Hann);
        assert_eq!("none".parse::<Window>().unwrap(), Window::None);
        assert!("kaiser".parse::<Window>().is_err());
    }

    #[test]
    fn series_spectrum_by_channel() {
        let mut s = ObservableSeries::new(&["rms", "norm"]);
        for i in 0..256 {
            let t = i as f64 * 0.5;
            s.push(t, &[(0.7 * t).cos(), 1.0]).unwrap();
        }
        let peak = dominant_frequency(&s.spectrum("rms", Window::Hann).unwrap(), None).unwrap();
        assert!((peak.omega - 0.7).abs() < 0.01);
        assert!(s.spectrum("missing", Window::Hann).is_err());
        assert!(s.push(1.0, &[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn gaussian_is_its_own_best_fit() {
        let grid = build_grid(40.0, 4000).unwrap();
        for width in [1.0, 2.0, equilibrium_width()] {
            let rho: Vec<f64> = grid.points().iter().map(|&r| gaussian_density(r, width)).collect();
            let fit = gaussianity(&grid, &rho).unwrap();
            assert_relative_eq!(fit.best_r, width, max_relative = 1e-10);
            assert!(fit.distance <= 1e-10, "{}", fit.distance);
        }
    }

    #[test]
    fn non_gaussian_profile_is_measurably_distant() {
        let grid = build_grid(40.0, 4000).unwrap();
        let rho: Vec<f64> = grid.points().iter().map(|&r| (-r).exp()).collect();
        assert!(gaussianity(&grid, &rho).unwrap().distance > 0.1);
        assert!(gaussianity(&grid, &vec![0.0; 4000]).is_err());
    }

    #[test]
    fn closest_gaussian_never_loses_to_the_moment_width() {
        let grid = build_grid(60.0, 3000).unwrap();
        // Gaussian core plus a faint wide halo: the halo drags the second moment out.
        let rho: Vec<f64> = grid
            .points()
            .iter()
            .map(|&r| 0.99 * gaussian_density(r, 3.0) + 0.01 * gaussian_density(r, 15.0))
            .collect();
        let moment = gaussianity(&grid, &rho).unwrap();
        let closest = closest_gaussian(&grid, &rho).unwrap();
        assert!(closest.distance <= moment.distance);
        assert!(moment.best_r > 3.3);
        assert!((closest.best_r - 3.0).abs() < 0.1, "{}", closest.best_r);

        let pure: Vec<f64> = grid.points().iter().map(|&r| gaussian_density(r, 2.5)).collect();
        let fit = closest_gaussian(&grid, &pure).unwrap();
        assert!((fit.best_r - 2.5).abs() < 1e-6 && fit.distance < 1e-6);
    }

    #[test]
    fn virial_ratios_of_the_ansatz() {
        let (r0, r1) = (critical_width(), equilibrium_width());
        let ratio = |r| virial_ratio(gaussian_kinetic_energy(r).unwrap(), gaussian_potential_energy(r).unwrap()).unwrap();
        assert_relative_eq!(ratio(r0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(ratio(r1), 2.0, max_relative = 1e-14);
        assert!(virial_ratio(0.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn parseval(x in proptest::collection::vec(-10.0f64..10.0, 1..300)) {
            let energy: f64 = x.iter().map(|v| v * v).sum();
            let spectral: f64 = dft(&x).iter().map(|z| z.norm_sqr()).sum::<f64>() / x.len() as f64;
            prop_assert!((energy - spectral).abs() <= 1e-10 * energy.max(1e-300));
        }

        #[test]
        fn off_bin_tones_resolve_to_a_tenth_of_a_bin(frac in 0.0f64..1.0, k in 20usize..200) {
            let n = 2048;
            let dt = 0.5;
            let bin = 2.0 * PI / (n as f64 * dt);
            let omega = (k as f64 + frac) * bin;
            let x = sampled(|t| (omega * t).sin(), dt, n);
            let peak = dominant_frequency(&spectrum(&x, dt, Window::Hann).unwrap(), None).unwrap();
            prop_assert!((peak.omega - omega).abs() <= 0.1 * bin);
        }
    }
}
