//! Quantum weight enumerator (QWE) machinery for qubit states and codes.
//!
//! The crate is organized around three vector families living in ℝ^{n+1}:
//! Shor-Laflamme distributions (SLD, squared Pauli correlations stratified by
//! weight), averaged purity distributions (APD, mean subsystem purities by
//! subsystem size), and triplet probability distributions (TPD, the outcome
//! statistics of a two-copy Bell sampling experiment). The [`transforms`]
//! module provides the nine linear maps connecting the three families and
//! their duals, in exact rational or float arithmetic.
//!
//! On top of that sit
//! - [`states`]: dense-matrix and stabilizer-group oracles that compute
//!   enumerators from first principles, plus analytic state families,
//! - [`noise`]: local depolarizing noise acting on enumerators and
//!   entanglement-criterion noise thresholds,
//! - [`sampler`]: a Clifford tableau simulator of two-copy Bell sampling with
//!   Pauli noise, parity-check postselection, and lookup-table correction,
//! - [`estimation`]: unbiased single-shot estimators for all six enumerator
//!   vectors, bootstrap confidence intervals, variance and sample planning,
//!   and damping-factor readout mitigation,
//! - [`analysis`]: entanglement criteria, code distance, TPD moments and
//!   admissibility bounds.

pub mod analysis;
pub mod error;
pub mod estimation;
pub mod math;
pub mod noise;
pub mod sampler;
pub mod states;
pub mod transforms;
pub mod vector;

pub use error::{Error, Result};
pub use transforms::{TransformKind, TransformMatrix};
pub use vector::{EnumeratorVector, Precision, Values, VectorKind};

/// Crate version string embedded in every CLI output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
