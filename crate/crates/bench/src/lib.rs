//! Shared fixtures for the benchmark targets: seeded draws so every run
//! measures the same inputs.

use spectralab_core::ensemble::{sample_matrix, EntryDistribution};
use spectralab_core::matrix::DenseMatrix;

pub fn gaussian_square(n: usize, seed: u64) -> DenseMatrix {
    sample_matrix(&EntryDistribution::RealGaussian, n, seed, 0).expect("fixture draw")
}

pub fn complex_square(n: usize, seed: u64) -> DenseMatrix {
    sample_matrix(&EntryDistribution::ComplexGaussian, n, seed, 0).expect("fixture draw")
}

pub fn sign_square(n: usize, seed: u64) -> DenseMatrix {
    sample_matrix(&EntryDistribution::BernoulliSym, n, seed, 0).expect("fixture draw")
}
