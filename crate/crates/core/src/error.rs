//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the admitted domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The photon cutoff could not reach the requested tail tolerance.
    #[error("truncation too small: n_max = {n_max}, tail mass {tail_mass:e} exceeds tolerance {tail_tol:e}")]
    Truncation {
        /// Largest cutoff tried.
        n_max: usize,
        /// Worst tail mass achieved at that cutoff.
        tail_mass: f64,
        /// Requested tolerance.
        tail_tol: f64,
    },
    /// A matrix handed to the eigensolver is not Hermitian.
    #[error("matrix not Hermitian: residual {0:e}")]
    NotHermitian(f64),
    /// A density matrix does not have unit trace.
    #[error("trace deviates from one by {0:e}")]
    Trace(f64),
    /// A tomographic quadrature is too coarse for exact inversion.
    #[error("insufficient quadrature: need at least {need_b} nodes in b and {need_g} in g, got {got_b} and {got_g}")]
    Quadrature {
        /// Required Gauss–Legendre nodes in 𝔟.
        need_b: usize,
        /// Required uniform nodes in 𝔤.
        need_g: usize,
        /// Supplied 𝔟 nodes.
        got_b: usize,
        /// Supplied 𝔤 nodes.
        got_g: usize,
    },
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
