//! Row-space geometry via modified Gram-Schmidt with re-orthogonalization.
//!
//! Every projection runs twice ("twice is enough"): a single MGS pass can
//! leave a residual that is orthogonal to the basis only to within the
//! conditioning of the input, while the second pass brings the defect down
//! to rounding level. Real input takes a plain `f64` path since the
//! distance experiments project hundreds of long real rows per trial.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

use super::DEPENDENT_ROW_EPS;

/// Orthonormal basis of the row space, dependent rows dropped.
///
/// A row counts as dependent when its residual after projection onto the
/// earlier rows falls below [`DEPENDENT_ROW_EPS`] relative to its original
/// norm; the returned basis always has full length equal to the numerical
/// rank of the row space.
pub fn orthonormal_row_basis(a: &DenseMatrix) -> Result<Vec<Vec<Complex64>>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InvalidParameter("matrix must be nonempty".into()));
    }
    if let Some(flat) = a.to_real() {
        let basis = build_basis_real(flat.chunks(a.cols()).map(|r| r.to_vec()));
        Ok(basis
            .into_iter()
            .map(|q| q.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect())
    } else {
        Ok(build_basis_complex(
            (0..a.rows()).map(|i| a.row(i).to_vec()),
        ))
    }
}

/// Euclidean distance from `x` to the span of the rows of `span`.
///
/// Rows of `span` that are dependent (or zero) are ignored; an empty or
/// fully degenerate span gives back `||x||`.
pub fn distance_to_span(span: &DenseMatrix, x: &[Complex64]) -> Result<f64> {
    if x.len() != span.cols() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "query length {} vs span width {}",
                x.len(),
                span.cols()
            ),
        });
    }
    let real_query = x.iter().all(|z| z.im == 0.0);
    if real_query {
        if let Some(flat) = span.to_real() {
            let basis = build_basis_real(flat.chunks(span.cols()).map(|r| r.to_vec()));
            let mut v: Vec<f64> = x.iter().map(|z| z.re).collect();
            project_twice_real(&basis, &mut v);
            return Ok(norm_real(&v));
        }
    }
    let basis = build_basis_complex((0..span.rows()).map(|i| span.row(i).to_vec()));
    let mut v = x.to_vec();
    project_twice_complex(&basis, &mut v);
    Ok(norm_complex(&v))
}

/// Distance from each row to the span of all the other rows, by a fresh
/// leave-one-out Gram-Schmidt per row.
pub(super) fn all_row_distances(a: &DenseMatrix) -> Result<Vec<f64>> {
    let m = a.rows();
    if let Some(flat) = a.to_real() {
        let rows: Vec<&[f64]> = flat.chunks(a.cols()).collect();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let basis = build_basis_real(
                rows.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, r)| r.to_vec()),
            );
            let mut v = rows[i].to_vec();
            project_twice_real(&basis, &mut v);
            out.push(norm_real(&v));
        }
        Ok(out)
    } else {
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let basis = build_basis_complex(
                (0..m).filter(|&j| j != i).map(|j| a.row(j).to_vec()),
            );
            let mut v = a.row(i).to_vec();
            project_twice_complex(&basis, &mut v);
            out.push(norm_complex(&v));
        }
        Ok(out)
    }
}

fn norm_real(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_complex(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn project_twice_real(basis: &[Vec<f64>], x: &mut [f64]) {
    for _ in 0..2 {
        for q in basis {
            let dot: f64 = q.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi -= dot * qi;
            }
        }
    }
}

fn project_twice_complex(basis: &[Vec<Complex64>], x: &mut [Complex64]) {
    for _ in 0..2 {
        for q in basis {
            let dot: Complex64 = q.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi -= dot * qi;
            }
        }
    }
}

fn build_basis_real(rows: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in rows {
        let norm0 = norm_real(&v);
        if norm0 == 0.0 {
            continue;
        }
        project_twice_real(&basis, &mut v);
        let resid = norm_real(&v);
        if resid > DEPENDENT_ROW_EPS * norm0 {
            let inv = 1.0 / resid;
            for x in v.iter_mut() {
                *x *= inv;
            }
            basis.push(v);
        }
    }
    basis
}

fn build_basis_complex(rows: impl Iterator<Item = Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut v in rows {
        let norm0 = norm_complex(&v);
        if norm0 == 0.0 {
            continue;
        }
        project_twice_complex(&basis, &mut v);
        let resid = norm_complex(&v);
        if resid > DEPENDENT_ROW_EPS * norm0 {
            let inv = 1.0 / resid;
            for x in v.iter_mut() {
                *x *= inv;
            }
            basis.push(v);
        }
    }
    basis
}
