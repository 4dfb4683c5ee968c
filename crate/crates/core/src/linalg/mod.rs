//! Dense spectral decompositions, written from scratch.
//!
//! Three solver families live here, each values-only:
//!
//! * eigenvalues: balanced Hessenberg reduction followed by shifted QR
//!   iteration (Francis double shift for real matrices, single Wilkinson
//!   shift for complex ones), with a Householder tridiagonalization + QL
//!   fast path for Hermitian input that guarantees exactly real output;
//! * singular values: Householder bidiagonalization (complex phases
//!   absorbed into the bidiagonal's moduli) followed by implicit-shift
//!   bidiagonal QR;
//! * row geometry: modified Gram-Schmidt with re-orthogonalization for
//!   distances from rows to spans, deliberately independent of the SVD
//!   path so the two can check each other.
//!
//! The inverse-square identity tying them together: for a full-row-rank
//! `m x n` matrix with `m <= n`, the sum of `1/d_i^2` over row-to-span
//! distances equals the sum of `1/sigma_j^2` over singular values.
//! [`nsmi_check`] evaluates both sides.

mod bidiag;
mod complex_schur;
mod lu;
mod orth;
mod real_schur;
mod symmetric;

pub use lu::determinant;
pub use orth::{distance_to_span, orthonormal_row_basis};

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

/// Largest dimension the dense eigenvalue and singular value solvers accept.
pub const MAX_DECOMPOSE_DIM: usize = 4096;

/// Relative threshold under which a subdiagonal entry is treated as zero
/// during QR iteration.
pub const DEFLATION_EPS: f64 = 1e-12;

/// Total QR iteration budget as a multiple of the dimension.
pub const ITERATION_BUDGET_FACTOR: usize = 50;

/// Stalled iterations between exceptional shifts.
pub const EXCEPTIONAL_SHIFT_PERIOD: usize = 10;

/// Relative threshold under which a Gram-Schmidt residual counts as
/// linearly dependent.
pub const DEPENDENT_ROW_EPS: f64 = 1e-12;

/// Eigenvalues of a square matrix together with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Eigenvalues sorted by real part, then imaginary part. Hermitian
    /// input yields exactly real eigenvalues (zero imaginary parts).
    pub eigenvalues: Vec<Complex64>,
    /// Trace-moment residual proxy: the larger of the relative defects in
    /// `sum(lambda) = tr A` and `sum(lambda^2) = tr A^2`. Both identities
    /// are preserved by similarity, so a large value witnesses a broken
    /// iteration even though no eigenvectors are available to form true
    /// residuals.
    pub max_residual: f64,
    /// QR iterations consumed.
    pub iterations: usize,
}

/// Computes all eigenvalues of a square matrix.
///
/// Dispatch: Hermitian matrices (checked exactly) go through symmetric
/// tridiagonalization, real matrices through the Francis double-shift QR,
/// and everything else through complex single-shift QR. The result must
/// pass the trace-moment residual check at `tol * n` or an error is
/// returned; iteration failure within the `50 n` budget is reported, never
/// silently truncated.
pub fn eigenvalues(a: &DenseMatrix, tol: f64) -> Result<SpectrumResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::InvalidParameter("matrix must be nonempty".into()));
    }
    if n > MAX_DECOMPOSE_DIM {
        return Err(Error::BudgetExceeded {
            what: "eigenvalue dimension",
            needed: n as u128,
            cap: MAX_DECOMPOSE_DIM as u128,
        });
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let budget = ITERATION_BUDGET_FACTOR * n;
    let (mut eigenvalues, iterations) = if a.is_hermitian() {
        symmetric::hermitian_eigenvalues(a, budget)?
    } else if a.is_real() {
        let buf = a.to_real().expect("checked real");
        real_schur::real_eigenvalues(buf, n, budget)?
    } else {
        complex_schur::complex_eigenvalues(a, budget)?
    };
    eigenvalues.sort_unstable_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let max_residual = trace_residual(a, &eigenvalues);
    if !(max_residual <= tol * n as f64) {
        return Err(Error::NoConvergence {
            what: "eigenvalue residual check",
            budget,
        });
    }
    Ok(SpectrumResult {
        eigenvalues,
        max_residual,
        iterations,
    })
}

/// Relative defect of the two trace moments preserved by similarity.
fn trace_residual(a: &DenseMatrix, eigenvalues: &[Complex64]) -> f64 {
    let n = a.rows();
    let tr: Complex64 = a.trace();
    let mut tr2 = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr2 += a.get(i, j) * a.get(j, i);
        }
    }
    let sum: Complex64 = eigenvalues.iter().sum();
    let sum2: Complex64 = eigenvalues.iter().map(|z| z * z).sum();
    let scale = a.frobenius_norm();
    let first = (sum - tr).norm() / (1.0 + scale);
    let second = (sum2 - tr2).norm() / (1.0 + scale * scale);
    first.max(second)
}

/// Computes all `min(m, n)` singular values, sorted descending.
///
/// Wide matrices are conjugate-transposed first (same singular values).
/// The result is validated against the Frobenius identity
/// `sum(sigma^2) = ||A||_F^2` at relative tolerance `1e-10`.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InvalidParameter("matrix must be nonempty".into()));
    }
    if a.rows().max(a.cols()) > MAX_DECOMPOSE_DIM {
        return Err(Error::BudgetExceeded {
            what: "singular value dimension",
            needed: a.rows().max(a.cols()) as u128,
            cap: MAX_DECOMPOSE_DIM as u128,
        });
    }
    let sigma = if a.rows() < a.cols() {
        bidiag::singular_values_tall(&a.conj_transpose())?
    } else {
        bidiag::singular_values_tall(a)?
    };
    let fro2 = a.frobenius_norm().powi(2);
    let sum2: f64 = sigma.iter().map(|s| s * s).sum();
    let defect = (sum2 - fro2).abs();
    if defect > 1e-10 * fro2.max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence {
            what: "singular value energy check",
            budget: ITERATION_BUDGET_FACTOR * a.rows().max(a.cols()),
        });
    }
    Ok(sigma)
}

/// Condition number `sigma_max / sigma_min`.
///
/// Returns infinity when the matrix is singular to working precision:
/// `sigma_min <= max(m, n) * eps * sigma_max` (this includes exact zeros).
pub fn condition_number(a: &DenseMatrix) -> Result<f64> {
    let sigma = singular_values(a)?;
    let largest = sigma[0];
    let smallest = *sigma.last().expect("nonempty");
    let rank_eps = a.rows().max(a.cols()) as f64 * f64::EPSILON;
    if smallest <= rank_eps * largest {
        return Ok(f64::INFINITY);
    }
    Ok(largest / smallest)
}

/// Smallest singular value, with the same working-precision floor as
/// [`condition_number`]: values below `max(m,n) * eps * sigma_max` report
/// as exactly zero.
pub fn smallest_singular_value(a: &DenseMatrix) -> Result<f64> {
    let sigma = singular_values(a)?;
    let largest = sigma[0];
    let smallest = *sigma.last().expect("nonempty");
    let rank_eps = a.rows().max(a.cols()) as f64 * f64::EPSILON;
    if smallest <= rank_eps * largest {
        return Ok(0.0);
    }
    Ok(smallest)
}

/// Distance from each row to the span of all other rows.
///
/// Computed with Gram-Schmidt projections only; no singular values are
/// involved, so this side of the inverse-square identity is independent
/// of the SVD code path.
pub fn row_distances(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InvalidParameter("matrix must be nonempty".into()));
    }
    orth::all_row_distances(a)
}

/// Both sides of the inverse-square identity for a full-row-rank matrix.
#[derive(Debug, Clone, Copy)]
pub struct NsmiReport {
    /// `sum_i 1 / d_i^2` over row-to-span distances.
    pub distance_side: f64,
    /// `sum_j 1 / sigma_j^2` over singular values.
    pub singular_side: f64,
    /// `|lhs - rhs| / max(lhs, rhs)`.
    pub relative_error: f64,
}

/// Evaluates the identity `sum 1/d_i^2 = sum 1/sigma_j^2` for an `m x n`
/// matrix with `m <= n` and full row rank. Rank deficiency (any row within
/// relative distance `1e-12` of the others' span) is an error.
pub fn nsmi_check(a: &DenseMatrix) -> Result<NsmiReport> {
    if a.rows() > a.cols() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "inverse-square identity needs m <= n, got {}x{}",
                a.rows(),
                a.cols()
            ),
        });
    }
    let distances = row_distances(a)?;
    let scale = a.frobenius_norm();
    if distances
        .iter()
        .any(|&d| d <= DEPENDENT_ROW_EPS * scale.max(f64::MIN_POSITIVE))
    {
        return Err(Error::InvalidParameter(
            "matrix is rank deficient; row-to-span distances degenerate".into(),
        ));
    }
    let sigma = singular_values(a)?;
    let distance_side: f64 = distances.iter().map(|d| 1.0 / (d * d)).sum();
    let singular_side: f64 = sigma.iter().map(|s| 1.0 / (s * s)).sum();
    let relative_error = (distance_side - singular_side).abs() / distance_side.max(singular_side);
    Ok(NsmiReport {
        distance_side,
        singular_side,
        relative_error,
    })
}

/// Copy of the matrix with the last `k` rows removed.
pub fn truncate_rows(a: &DenseMatrix, k: usize) -> Result<DenseMatrix> {
    if k >= a.rows() {
        return Err(Error::InvalidParameter(format!(
            "cannot drop {k} of {} rows",
            a.rows()
        )));
    }
    let m = a.rows() - k;
    Ok(DenseMatrix::from_fn(m, a.cols(), |i, j| a.get(i, j)))
}
