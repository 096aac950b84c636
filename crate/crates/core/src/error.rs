use std::path::PathBuf;

use crate::analysis::ObservableSeries;
use crate::variational::VariationalTrajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The variational width fell to the floor `R_floor`; the samples up to
    /// the failure are kept.
    #[error("collapse of ansatz: R = {radius:e} at t = {time} fell below the floor")]
    Collapse {
        time: f64,
        radius: f64,
        partial: Box<VariationalTrajectory>,
    },

    #[error("step size too large: {0}")]
    StepSize(String),

    #[error("trajectory is not expanding over the fit window")]
    NotExpanding,

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A real-time evolution failed part way; `partial` holds the
    /// observables recorded before the failing step.
    #[error("evolution stopped at t = {time}: {source}")]
    Evolution {
        time: f64,
        #[source]
        source: Box<Error>,
        partial: Box<ObservableSeries>,
    },

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Input { .. } | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 2,
            Error::NonConvergence { .. } => 4,
            Error::Evolution { source, .. } => source.exit_code(),
            Error::Numerical(_) | Error::Collapse { .. } | Error::StepSize(_) | Error::NotExpanding => 3,
        }
    }
}
