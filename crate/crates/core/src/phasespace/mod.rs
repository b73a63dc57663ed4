//! Spin, oscillator and bipartite phase-space quasiprobability densities.
//!
//! The spherical-tensor components ϱ_kq are the common currency of every
//! spin density. Each density is available through the generic tensor sum
//! and through explicit closed forms in terms of density-matrix entries;
//! the two are cross-checked in the test suite and by `selfcheck`.

pub mod bipartite;
pub mod grid;
pub mod lobes;
pub mod sphere;
pub mod tensor;

pub use bipartite::{q_bipartite, q_osc, w_bipartite, w_osc, BipartiteEvaluator, KernelRoute};
pub use grid::{integrate_plane, integrate_sphere, PlaneGrid, SphereGrid};
pub use lobes::count_lobes;
pub use sphere::{p_spin, q_spin, w_spin, Distribution};
pub use tensor::{spherical_components, SphericalTensorRep};
