//! Coordinate Bethe Ansatz machinery for one-dimensional many-body systems
//! with the general four-parameter family of local two-body interactions.
//!
//! The crate covers the whole chain from coupling constants to explicit
//! eigenfunctions:
//!
//! * [`couplings`]: the couplings `(c, λ, γ, η)`, their boundary-condition
//!   matrices and the gauge data mapping `(c, 0, 0, η)` onto the delta gas.
//! * [`permutation`]: `S_N` in one-line notation with the ordering used to lay
//!   out coefficient vectors, rank/unrank, transposition words and the right
//!   regular representation.
//! * [`scattering`]: closed-form two-body amplitudes and an independent
//!   boundary-value solver.
//! * [`bethe`]: the `N! × N!` matrices `Y_i(u)` and coefficient propagation.
//! * [`factorization`]: factorization identities, matrix Yang–Baxter
//!   relations, integrability classification and coupling scans.
//! * [`wavefunction`]: position-space evaluation, boundary-condition residuals,
//!   the determinant eigenfunction and the gauge map.
//!
//! Units are `ħ = 2m = 1`; the kinetic term is `-∂²`.
//!
//! Batch work (panels, scans, table fills) runs on rayon when the `parallel`
//! feature is enabled, see [`exec`].

pub mod bethe;
pub mod couplings;
pub mod error;
pub mod exec;
pub mod factorization;
pub mod permutation;
pub mod sampling;
pub mod scattering;
pub mod tolerance;
pub mod wavefunction;

pub use error::{Error, Result};

pub use num_complex::Complex64;
pub use bethe::{BetheState, CoefficientVector, MomentumVector, YangMatrix};
pub use couplings::{BoundaryMatrix, CouplingParameters, GaugeData};
pub use factorization::{FactorizationReport, GridSpec, IntegrabilityClass};
pub use permutation::{Permutation, PermutationRank, RegularRepMatrix, SymmetricGroup};
pub use scattering::AmplitudeSet;
pub use wavefunction::{PlaneWaveExpansion, PositionVector, Statistics, Wedge};
