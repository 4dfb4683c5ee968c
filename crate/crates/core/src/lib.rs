// Negated comparisons like `!(x > 0.0)` reject NaN along with the
// out-of-range values; the rewrites clippy suggests would admit it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for non-Hermitian random matrices and signed-sum
//! concentration.
//!
//! The crate is organized around the experiment pipeline:
//!
//! * [`ensemble`] samples random matrices with i.i.d. entries (symmetric
//!   Bernoulli, real/complex Gaussian, or a custom discrete law with exact
//!   rational probabilities) and combines them with deterministic shifts.
//! * [`linalg`] holds the dense decompositions everything else rests on:
//!   eigenvalues (Hessenberg + shifted QR), singular values (Householder
//!   bidiagonalization + implicit-shift QR), row-to-span distances, and the
//!   identity connecting the two.
//! * [`spectral`] turns spectra into empirical measures and compares them
//!   to reference laws (uniform on the unit disk, semicircle) or to each
//!   other.
//! * [`littlewood_offord`] computes exact concentration probabilities of
//!   random signed sums, together with the arithmetic-progression machinery
//!   that explains large concentration.
//! * [`smoothed`] runs the invertibility experiments: condition-number tail
//!   bounds under deterministic perturbations and row-to-span distance
//!   lower bounds.
//!
//! All randomness flows through [`rng::trial_rng`], a counter-based scheme
//! that makes every (seed, trial) pair reproducible independently of thread
//! scheduling.

pub mod ensemble;
pub mod error;
pub mod linalg;
pub mod littlewood_offord;
pub mod matrix;
pub mod rng;
pub mod smoothed;
pub mod spectral;

pub use ensemble::{EntryDistribution, ExperimentConfig, ShiftKind, ShiftSpec};
pub use error::Error;
pub use matrix::DenseMatrix;
pub use spectral::{EmpiricalMeasure, ReferenceLaw, Region};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
