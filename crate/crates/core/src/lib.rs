//! Preparational uncertainty relations for `N` continuous quantum variables.
//!
//! Everything is computed at the level of covariance matrices of second
//! moments. First moments are taken to vanish throughout.

pub mod covariance;
pub mod error;
pub mod functional;
pub mod inequalities;
pub mod region;
pub mod sampling;
pub mod symplectic;

pub use covariance::{CovarianceMatrix, MomentTriple, QuantumNumbers};
pub use error::{Error, Result};
pub use inequalities::{InequalityKind, InequalitySpec, Verdict};
pub use symplectic::{PhaseSpace, SymplecticMatrix, WilliamsonResult};
