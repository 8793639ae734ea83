//! Spectral solver and asymptotic verification toolkit for the one-dimensional
//! nonlocal diffusion equation `u_t = J∗u − u`.
//!
//! The solution is computed exactly in Fourier space on a periodic grid large
//! enough that the solution never reaches the boundary, and split into its
//! rough part `e^{-t}u₀` and smooth part `v`.

pub mod asymptotics;
pub mod csv;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod kernels;
pub mod quadrature;
pub mod semigroup;

pub use error::{Error, Result};
pub use grid::{Field, Grid, Norm, SpectralField, TailGuard};
pub use kernels::{check_admissibility, AdmissibilityConfig, AdmissibilityReport, Kernel, KernelForm};
pub use semigroup::{oracle_evolve, EvolutionSnapshot, LocalHeat, Propagator, PropagatorPlan};
