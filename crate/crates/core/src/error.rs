//! Error type shared by every module of the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by construction, solver, and I/O paths.
#[derive(Debug)]
pub enum Error {
    /// Two objects that must share a shape/grid do not.
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// An argument violates a documented precondition.
    InvalidArgument(String),
    /// A synthesis grid is coarser than the finest wavelet scale.
    ResolutionTooCoarse { grid_step: f64, finest_scale: f64 },
    /// An iterative solver exhausted its iteration budget.
    SolverDidNotConverge { iters: usize, residual: f64 },
    /// An iterate grew without bound.
    Diverged { norm: f64 },
    /// A history container was empty where at least one entry is required.
    EmptyHistory,
    /// A non-finite value appeared where finite data is required.
    NonFinite(&'static str),
    /// File I/O failure (PGM/PBM/CSV/plan files).
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch {
                what,
                expected,
                got,
            } => write!(f, "shape mismatch for {what}: expected {expected}, got {got}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ResolutionTooCoarse {
                grid_step,
                finest_scale,
            } => write!(
                f,
                "grid step {grid_step} is coarser than the finest wavelet scale {finest_scale}"
            ),
            Error::SolverDidNotConverge { iters, residual } => write!(
                f,
                "solver did not converge within {iters} iterations (residual {residual:.3e})"
            ),
            Error::Diverged { norm } => write!(f, "iterate diverged (norm {norm:.3e})"),
            Error::EmptyHistory => write!(f, "mask history is empty"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
