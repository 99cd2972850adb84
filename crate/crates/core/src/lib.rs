//! Reconstruction of 1D signals and 2D images from noisy, non-uniform Fourier
//! measurements.
//!
//! The toolkit implements a two-stage pipeline: a projection stage that
//! least-squares fits the Fourier data onto a finite Haar wavelet subspace
//! through an analytically assembled forward operator, and a correction stage
//! that refines the projected coefficients with an edge-guided hybrid of total
//! variation (on a dilated band `Γ` around detected edges) and total
//! fractional variation (on the complement). One-stage baselines (`ℓ¹`,
//! Tikhonov, single-stage TV) and the metrics needed to compare them are
//! included.
//!
//! Modules follow the pipeline: [`grid`] holds the discrete containers,
//! [`haar`] the wavelet basis and forward operator, [`sampling`] the jittered
//! frequency plans and the noise model, [`fracdiff`] the fractional derivative
//! strips, [`proxops`] the proximal operators and conjugate-gradient solvers,
//! [`edges`] the `Γ`-mask machinery, [`solvers`] the optimization drivers, and
//! [`metrics`] the quality measures.
//!
//! With the default `parallel` feature the dense operator kernels use rayon;
//! disabling it falls back to the sequential implementations (same results:
//! every parallel path is chunk-deterministic).

pub mod edges;
pub mod error;
pub mod fracdiff;
pub mod grid;
pub mod haar;
pub mod linalg;
pub mod metrics;
pub mod pnm;
pub mod proxops;
pub mod sampling;
pub mod solvers;

pub use error::{Error, Result};
