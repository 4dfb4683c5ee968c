//! Singular values via Golub-Kahan bidiagonalization and implicit-shift
//! bidiagonal QR.
//!
//! Complex input is reduced with unitary Householder reflectors on both
//! sides; the resulting bidiagonal is complex, but multiplying by suitable
//! unit-modulus diagonal matrices on either side makes it real without
//! touching singular values, so only the moduli of the two bands are kept.
//! The QR stage runs entirely in real arithmetic at machine-epsilon
//! deflation, which keeps small singular values accurate in a relative
//! sense; the energy identity `sum sigma^2 = ||A||_F^2` is checked by the
//! caller.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

use super::ITERATION_BUDGET_FACTOR;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Singular values of an `m x n` matrix with `m >= n`, sorted descending.
pub fn singular_values_tall(a: &DenseMatrix) -> Result<Vec<f64>> {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n, "caller transposes wide input");
    let mut b = a.data().to_vec();
    let mut u = vec![ZERO; m.max(n)];

    for j in 0..n {
        left_reflect(&mut b, m, n, j, &mut u);
        if j + 2 < n {
            right_reflect(&mut b, m, n, j, &mut u);
        }
    }

    let mut d: Vec<f64> = (0..n).map(|j| b[j * n + j].norm()).collect();
    let mut e: Vec<f64> = (0..n.saturating_sub(1))
        .map(|j| b[j * n + j + 1].norm())
        .collect();

    // Equilibrate so the QR stage's absolute zero tests act relatively.
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return Ok(d);
    }
    for x in d.iter_mut() {
        *x /= scale;
    }
    for x in e.iter_mut() {
        *x /= scale;
    }
    bidiagonal_qr_values(&mut d, &mut e, ITERATION_BUDGET_FACTOR * n)?;
    for x in d.iter_mut() {
        *x *= scale;
    }
    Ok(d)
}

/// Householder reflector `I - beta u u^H` on rows `j..m`, annihilating
/// column `j` below the diagonal; applied to columns `j..n`.
fn left_reflect(b: &mut [Complex64], m: usize, n: usize, j: usize, u: &mut [Complex64]) {
    let x0 = b[j * n + j];
    let mut below2 = 0.0;
    for i in (j + 1)..m {
        below2 += b[i * n + j].norm_sqr();
    }
    if below2 == 0.0 {
        return;
    }
    let norm2 = below2 + x0.norm_sqr();
    let norm = norm2.sqrt();
    // gamma = -phase(x0) * norm makes u^H x real positive.
    let gamma = if x0 == ZERO {
        Complex64::new(-norm, 0.0)
    } else {
        -(x0 / x0.norm()) * norm
    };
    let beta = 1.0 / (norm2 + norm * x0.norm());
    u[j] = x0 - gamma;
    for i in (j + 1)..m {
        u[i] = b[i * n + j];
    }
    for col in j..n {
        let mut s = ZERO;
        for i in j..m {
            s += u[i].conj() * b[i * n + col];
        }
        s *= beta;
        for i in j..m {
            b[i * n + col] -= s * u[i];
        }
    }
    b[j * n + j] = gamma;
    for i in (j + 1)..m {
        b[i * n + j] = ZERO;
    }
}

/// Householder reflector `I - beta v v^H` on columns `j+1..n`, annihilating
/// row `j` right of the superdiagonal; applied to rows `j..m`. The
/// reflector vector is `conj` of the row pattern so that the transformed
/// row lands on `gamma e_1`.
fn right_reflect(b: &mut [Complex64], m: usize, n: usize, j: usize, v: &mut [Complex64]) {
    let x0 = b[j * n + (j + 1)];
    let mut beyond2 = 0.0;
    for k in (j + 2)..n {
        beyond2 += b[j * n + k].norm_sqr();
    }
    if beyond2 == 0.0 {
        return;
    }
    let norm2 = beyond2 + x0.norm_sqr();
    let norm = norm2.sqrt();
    let gamma = if x0 == ZERO {
        Complex64::new(-norm, 0.0)
    } else {
        -(x0 / x0.norm()) * norm
    };
    let beta = 1.0 / (norm2 + norm * x0.norm());
    v[j + 1] = x0.conj() - gamma.conj();
    for k in (j + 2)..n {
        v[k] = b[j * n + k].conj();
    }
    for i in j..m {
        let mut s = ZERO;
        for k in (j + 1)..n {
            s += b[i * n + k] * v[k];
        }
        s *= beta;
        for k in (j + 1)..n {
            b[i * n + k] -= s * v[k].conj();
        }
    }
    b[j * n + (j + 1)] = gamma;
    for k in (j + 2)..n {
        b[j * n + k] = ZERO;
    }
}

fn givens_real(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        return (1.0, 0.0);
    }
    let r = a.hypot(b);
    (a / r, b / r)
}

/// Implicit-shift QR on a real bidiagonal matrix (diagonal `d`,
/// superdiagonal `e`, both pre-scaled to unit magnitude). On return `d`
/// holds the singular values sorted descending.
///
/// Each pass either deflates a negligible superdiagonal entry, chases a
/// zero diagonal entry off the bottom with left rotations (the Wilkinson
/// shift degenerates there), or runs one shifted bulge chase. Exceeding
/// `budget` chases is an error.
fn bidiagonal_qr_values(d: &mut [f64], e: &mut [f64], budget: usize) -> Result<()> {
    let n = d.len();
    if n == 1 {
        d[0] = d[0].abs();
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut iter = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        let threshold = eps * (d[hi - 1].abs() + d[hi].abs());
        if e[hi - 1].abs() <= threshold {
            e[hi - 1] = 0.0;
            hi -= 1;
            continue;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let threshold = eps * (d[lo - 1].abs() + d[lo].abs());
            if e[lo - 1].abs() <= threshold {
                e[lo - 1] = 0.0;
                break;
            }
            lo -= 1;
        }

        iter += 1;
        if iter > budget {
            return Err(Error::NoConvergence {
                what: "bidiagonal QR iteration",
                budget,
            });
        }

        // A zero diagonal entry decouples the block once its superdiagonal
        // neighbor is chased off the bottom with left rotations.
        let mut found_zero = false;
        for idx in lo..hi {
            if d[idx].abs() <= eps {
                d[idx] = 0.0;
                let mut z = e[idx];
                e[idx] = 0.0;
                for j in (idx + 1)..=hi {
                    let (c, s) = givens_real(d[j], z);
                    d[j] = c * d[j] + s * z;
                    if j < hi {
                        z = -s * e[j];
                        e[j] *= c;
                    }
                }
                found_zero = true;
                break;
            }
        }
        if found_zero {
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of B^T B.
        let d_hi = d[hi];
        let d_hi1 = d[hi - 1];
        let e_hi1 = e[hi - 1];
        let e_hi2 = if hi >= lo + 2 { e[hi - 2] } else { 0.0 };
        let t11 = d_hi1 * d_hi1 + e_hi2 * e_hi2;
        let t12 = d_hi1 * e_hi1;
        let t22 = d_hi * d_hi + e_hi1 * e_hi1;
        let dd = (t11 - t22) / 2.0;
        let sign_d = if dd >= 0.0 { 1.0 } else { -1.0 };
        let mu = t22 - t12 * t12 / (dd + sign_d * (dd * dd + t12 * t12).sqrt());

        // Bulge chase: alternate right rotations (columns k, k+1) and left
        // rotations (rows k, k+1) down the band.
        let mut x = d[lo] * d[lo] - mu;
        let mut z = d[lo] * e[lo];
        for k in lo..hi {
            let (c, s) = givens_real(x, z);
            if k > lo {
                e[k - 1] = c * x + s * z;
            }
            let dk = d[k];
            let ek = e[k];
            let dk1 = d[k + 1];
            d[k] = c * dk + s * ek;
            e[k] = c * ek - s * dk;
            let bulge = s * dk1;
            d[k + 1] = c * dk1;

            let (c2, s2) = givens_real(d[k], bulge);
            d[k] = c2 * d[k] + s2 * bulge;
            let old_ek = e[k];
            let old_dk1 = d[k + 1];
            e[k] = c2 * old_ek + s2 * old_dk1;
            d[k + 1] = c2 * old_dk1 - s2 * old_ek;
            if k + 1 < hi {
                let old_ek1 = e[k + 1];
                x = e[k];
                z = s2 * old_ek1;
                e[k + 1] = c2 * old_ek1;
            }
        }
    }

    for x in d.iter_mut() {
        *x = x.abs();
    }
    d.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(())
}
