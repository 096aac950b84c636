//! CSV and JSON persistence.
//!
//! Series and profiles are CSV with a single header row; scalar summaries
//! and manifests are JSON. Floats are written in Rust's shortest
//! round-trip form, so identical runs produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::ObservableSeries;
use crate::error::{Error, Result};
use crate::radialpde::{RadialGrid, RadialPotential, RadialWavefunction};
use crate::variational::VariationalTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::domain(format!("unknown output format `{other}`"))),
        }
    }
}

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn from_series(series: &ObservableSeries) -> Self {
        let mut columns = vec!["t".to_string()];
        columns.extend(series.names().iter().cloned());
        let cols: Vec<&[f64]> = series.columns().map(|(_, c)| c).collect();
        let rows = series
            .times()
            .iter()
            .enumerate()
            .map(|(i, &t)| std::iter::once(t).chain(cols.iter().map(|c| c[i])).collect())
            .collect();
        Self { columns, rows }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let mut out = out;
                serde_json::to_writer(&mut out, self)?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    pub fn save(&self, path: &Path, format: Format) -> Result<()> {
        self.write(BufWriter::new(File::create(path)?), format)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let input_error = |message: String| Error::Input { path: path.to_path_buf(), message };
        let mut reader = csv::Reader::from_path(path)?;
        let columns: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| input_error(format!("row {}: {e}", line + 2)))?;
            if row.len() != columns.len() {
                return Err(input_error(format!("row {} has {} fields", line + 2, row.len())));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    fn require(&self, name: &str, path: &Path) -> Result<Vec<f64>> {
        self.column(name).ok_or_else(|| Error::Input {
            path: path.to_path_buf(),
            message: format!("missing column `{name}`"),
        })
    }
}

/// Trajectory table `t, R, Rdot, energy`.
pub fn trajectory_table(trajectory: &VariationalTrajectory) -> Result<Table> {
    let mut table = Table::new(&["t", "R", "Rdot", "energy"]);
    for s in &trajectory.states {
        table.push(vec![s.t, s.r, s.rdot, s.energy()?]);
    }
    Ok(table)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Reads a series CSV whose first column is `t`.
pub fn read_series(path: &Path) -> Result<ObservableSeries> {
    let table = Table::read_csv(path)?;
    let t = table.require("t", path)?;
    let columns = table
        .columns
        .iter()
        .filter(|c| c.as_str() != "t")
        .map(|c| (c.clone(), table.column(c).unwrap_or_default()))
        .collect();
    ObservableSeries::from_columns(t, columns)
}

/// Rebuilds the uniform grid from an `r` column, which must read `j·dr`.
fn grid_from_radii(r: &[f64], path: &Path) -> Result<RadialGrid> {
    let bad = |message: &str| Error::Input { path: path.to_path_buf(), message: message.into() };
    let (&first, &last) = match (r.first(), r.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(bad("file holds no grid points")),
    };
    let dr = last / r.len() as f64;
    if (first - dr).abs() > 1e-9 * dr {
        return Err(bad("radii must start one spacing from the origin"));
    }
    if r.iter().enumerate().any(|(i, &x)| (x - (i + 1) as f64 * dr).abs() > 1e-9 * last) {
        return Err(bad("radii are not uniformly spaced"));
    }
    RadialGrid::with_spacing(dr, r.len()).map_err(|e| bad(&e.to_string()))
}

/// Profile table `r, re_u, im_u, rho, V`.
pub fn snapshot_table(psi: &RadialWavefunction, potential: &RadialPotential) -> Table {
    let mut table = Table::new(&["r", "re_u", "im_u", "rho", "V"]);
    let rho = psi.density();
    for (i, z) in psi.values().iter().enumerate() {
        table.push(vec![psi.grid().r(i), z.re, z.im, rho[i], potential.values()[i]]);
    }
    table
}

/// Ground-state table `r, u, rho, V` for a real state.
pub fn ground_state_table(psi: &RadialWavefunction, potential: &RadialPotential) -> Table {
    let mut table = Table::new(&["r", "u", "rho", "V"]);
    let rho = psi.density();
    for (i, z) in psi.values().iter().enumerate() {
        table.push(vec![psi.grid().r(i), z.re, rho[i], potential.values()[i]]);
    }
    table
}

/// Loads a state from a ground-state (`r, u`) or snapshot (`r, re_u, im_u`) file.
pub fn read_state(path: &Path) -> Result<RadialWavefunction> {
    let table = Table::read_csv(path)?;
    let r = table.require("r", path)?;
    let grid = grid_from_radii(&r, path)?;
    let u: Vec<Complex64> = if let Some(u) = table.column("u") {
        u.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
    } else {
        let re = table.require("re_u", path)?;
        let im = table.require("im_u", path)?;
        re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
    };
    RadialWavefunction::new(grid, u)?.normalized()
}

/// Loads `(grid, rho)` from any profile file with `r` and `rho` columns.
pub fn read_density(path: &Path) -> Result<(RadialGrid, Vec<f64>)> {
    let table = Table::read_csv(path)?;
    let r = table.require("r", path)?;
    let grid = grid_from_radii(&r, path)?;
    Ok((grid, table.require("rho", path)?))
}
