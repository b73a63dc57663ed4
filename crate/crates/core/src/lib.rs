//! Adiabatic dynamics of a spin-s qudit (s = 1, 3/2) strongly coupled to a
//! harmonic oscillator.
//!
//! The crate builds the block-diagonal adiabatic Hamiltonian, evolves a
//! quasi-Bell initial state, and derives reduced density matrices, spin and
//! oscillator phase-space distributions, entropy and revival diagnostics,
//! spin tomograms and squeezing parameters.

pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod phasespace;
pub mod specfun;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
