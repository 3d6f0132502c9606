use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A type invariant was violated at construction.
    #[error("invalid {what}: {reason}")]
    Invariant { what: &'static str, reason: String },

    /// Root finding did not converge; carries the last bracket.
    #[error("root solve for xi={xi} did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    RootNotConverged {
        xi: f64,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature did not reach tolerance {tolerance} on [{lo}, {hi}]")]
    QuadratureNotConverged { lo: f64, hi: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("Picard iteration did not converge at t={t}: last relative update {residual:e} after {iterations} iterations")]
    PicardNotConverged {
        t: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("verification precondition failed: {0}")]
    Precondition(String),

    #[error("missing functional column `{0}`")]
    MissingFunctional(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {message}")]
    Csv { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invariant(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invariant {
            what,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Expression(_) | Error::Invariant { .. } | Error::Domain(_) => 2,
            Error::Precondition(_) | Error::MissingFunctional(_) => 4,
            Error::Io { .. } | Error::Csv { .. } => 2,
            Error::RootNotConverged { .. }
            | Error::QuadratureNotConverged { .. }
            | Error::Numerical(_)
            | Error::PicardNotConverged { .. } => 3,
        }
    }
}
