//! Hermitian eigenvalues: Householder tridiagonalization followed by QL
//! iteration with implicit Wilkinson shifts, values only. The reduction and
//! iteration follow the classical Algol `tred2`/`tql1` procedures with the
//! eigenvector bookkeeping removed.
//!
//! The Wilkinson shift is globally convergent on symmetric tridiagonal
//! matrices (no stalls, so no exceptional-shift escape is needed here); the
//! shared deflation threshold and iteration budget still apply.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

use super::DEFLATION_EPS;

/// Eigenvalues of a Hermitian matrix, exactly real by construction.
///
/// Real symmetric input is tridiagonalized directly. Complex Hermitian
/// `A = X + iY` is embedded into the real symmetric matrix
/// `[[X, -Y], [Y, X]]` of twice the order, whose spectrum is that of `A`
/// with every eigenvalue doubled; one copy of each adjacent pair is kept.
pub fn hermitian_eigenvalues(
    a: &DenseMatrix,
    budget: usize,
) -> Result<(Vec<Complex64>, usize)> {
    let n = a.rows();
    let (mut values, iterations) = if let Some(buf) = a.to_real() {
        symmetric_real_eigenvalues(buf, n, budget)?
    } else {
        let m = 2 * n;
        let mut buf = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = a.get(i, j);
                buf[i * m + j] = z.re;
                buf[i * m + (n + j)] = -z.im;
                buf[(n + i) * m + j] = z.im;
                buf[(n + i) * m + (n + j)] = z.re;
            }
        }
        let (doubled, iters) = symmetric_real_eigenvalues(buf, m, budget)?;
        let mut doubled = doubled;
        doubled.sort_by(f64::total_cmp);
        // The doubled copies are adjacent after sorting; indices 0, 2, ...
        // select one representative from each pair.
        (doubled.into_iter().step_by(2).collect(), iters)
    };
    values.sort_by(f64::total_cmp);
    let eigenvalues = values.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok((eigenvalues, iterations))
}

fn symmetric_real_eigenvalues(
    mut a: Vec<f64>,
    n: usize,
    budget: usize,
) -> Result<(Vec<f64>, usize)> {
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    let iterations = ql_values(&mut d, &mut e, budget)?;
    Ok((d, iterations))
}

/// Householder reduction of a real symmetric matrix (lower triangle read)
/// to tridiagonal form. Returns the diagonal `d` and subdiagonal `e`, where
/// `e[i]` couples `d[i - 1]` and `d[i]` (`e[0]` is zero).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                // Rank-two update A <- A - u q^T - q u^T on the leading block.
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// QL iteration with implicit Wilkinson shifts on a symmetric tridiagonal
/// matrix; eigenvalues replace `d` in no particular order. Subdiagonal
/// entries deflate at relative size [`DEFLATION_EPS`]; exceeding `budget`
/// total sweeps is an error.
fn ql_values(d: &mut [f64], e: &mut [f64], budget: usize) -> Result<usize> {
    let n = d.len();
    if n <= 1 {
        return Ok(0);
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let scale: f64 = d.iter().chain(e.iter()).map(|x| x.abs()).fold(0.0, f64::max);
    let mut total = 0usize;

    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                let thr = DEFLATION_EPS * if dd == 0.0 { scale } else { dd };
                if e[m].abs() <= thr {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total += 1;
            if total > budget {
                return Err(Error::NoConvergence {
                    what: "symmetric QL iteration",
                    budget,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g == 0.0 { 1.0 } else { g }));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // The rotation chain annihilated a coupling early;
                    // restart the search on the shortened block.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(total)
}
