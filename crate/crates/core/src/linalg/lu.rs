//! Determinant by LU factorization with partial pivoting. Kept separate
//! from the iterative solvers so it can serve as an independent oracle for
//! eigenvalue products and Gram determinants.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

/// Determinant of a square matrix. Exact zero is returned as soon as a
/// pivot column vanishes entirely.
pub fn determinant(a: &DenseMatrix) -> Result<Complex64> {
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
    let mut lu = a.data().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm();
        for i in (k + 1)..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p != k {
            for j in 0..n {
                lu.swap(p * n + j, k * n + j);
            }
            det = -det;
        }
        let pivot = lu[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let f = lu[i * n + k] / pivot;
            for j in (k + 1)..n {
                let sub = f * lu[k * n + j];
                lu[i * n + j] -= sub;
            }
        }
    }
    Ok(det)
}
