//! Real nonsymmetric eigenvalues: balance, Householder reduction to upper
//! Hessenberg form, then Francis double-shift QR iteration. Descends from
//! the Algol `balance`/`orthes`/`hqr` procedures of Martin and Wilkinson
//! and their EISPACK translations, stripped to eigenvalues only.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

use super::{DEFLATION_EPS, EXCEPTIONAL_SHIFT_PERIOD};

/// Eigenvalues of the row-major real matrix `h` of order `n`.
pub fn real_eigenvalues(
    mut h: Vec<f64>,
    n: usize,
    budget: usize,
) -> Result<(Vec<Complex64>, usize)> {
    if n == 1 {
        return Ok((vec![Complex64::new(h[0], 0.0)], 0));
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);
    let (re, im, iterations) = hqr(&mut h, n, budget)?;
    let eigenvalues = re
        .into_iter()
        .zip(im)
        .map(|(x, y)| Complex64::new(x, y))
        .collect();
    Ok((eigenvalues, iterations))
}

/// Iterative diagonal similarity with powers of two, equalizing row and
/// column norms. Powers of the radix are exact in floating point, so the
/// spectrum is untouched while the QR iteration's rounding behavior
/// improves for badly scaled input.
fn balance(h: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    let b2 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[j * n + i].abs();
                    r += h[i * n + j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= b2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= b2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    h[i * n + j] *= inv;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
        if converged {
            return;
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place, transforms
/// not accumulated).
fn hessenberg(h: &mut [f64], n: usize) {
    let high = n - 1;
    let mut ort = vec![0.0f64; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[i * n + m - 1].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hsum = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i * n + m - 1] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = hsum.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hsum -= ort[m] * g;
        ort[m] -= g;

        // Similarity H <- (I - u u^T / hsum) H (I - u u^T / hsum).
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i * n + j];
            }
            f /= hsum;
            for i in m..=high {
                h[i * n + j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[i * n + j];
            }
            f /= hsum;
            for j in m..=high {
                h[i * n + j] -= f * ort[j];
            }
        }
        h[m * n + m - 1] = scale * g;
        for i in (m + 1)..=high {
            h[i * n + m - 1] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns parallel
/// arrays of real and imaginary eigenvalue parts plus iterations used.
///
/// Subdiagonal entries deflate at relative size [`DEFLATION_EPS`]; an
/// exceptional ad hoc shift fires every [`EXCEPTIONAL_SHIFT_PERIOD`]
/// stalled iterations; exceeding `budget` total iterations is an error.
fn hqr(h: &mut [f64], nn: usize, budget: usize) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let mut d = vec![0.0f64; nn];
    let mut e = vec![0.0f64; nn];
    let at = |i: usize, j: usize| i * nn + j;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[at(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok((d, e, 0));
    }

    let mut n = nn - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    let (mut p, mut q, mut r, mut s, mut z, mut w, mut x, mut y);

    loop {
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > 0 {
            s = h[at(l - 1, l - 1)].abs() + h[at(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[at(l, l - 1)].abs() < DEFLATION_EPS * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One root found.
            h[at(n, n)] += exshift;
            d[n] = h[at(n, n)];
            e[n] = 0.0;
            if n == 0 {
                break;
            }
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots found.
            w = h[at(n, n - 1)] * h[at(n - 1, n)];
            p = (h[at(n - 1, n - 1)] - h[at(n, n)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[at(n, n)] += exshift;
            h[at(n - 1, n - 1)] += exshift;
            x = h[at(n, n)];
            if q >= 0.0 {
                // Real pair.
                z = if p >= 0.0 { p + z } else { p - z };
                d[n - 1] = x + z;
                d[n] = if z != 0.0 { x - w / z } else { d[n - 1] };
                e[n - 1] = 0.0;
                e[n] = 0.0;
                x = h[at(n, n - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in (n - 1)..nn {
                    z = h[at(n - 1, j)];
                    h[at(n - 1, j)] = q * z + p * h[at(n, j)];
                    h[at(n, j)] = q * h[at(n, j)] - p * z;
                }
                for i in 0..=n {
                    z = h[at(i, n - 1)];
                    h[at(i, n - 1)] = q * z + p * h[at(i, n)];
                    h[at(i, n)] = q * h[at(i, n)] - p * z;
                }
            } else {
                // Complex pair.
                d[n - 1] = x + p;
                d[n] = x + p;
                e[n - 1] = z;
                e[n] = -z;
            }
            if n == 1 {
                break;
            }
            n -= 2;
            iter = 0;
        } else {
            // Form shift.
            x = h[at(n, n)];
            y = h[at(n - 1, n - 1)];
            w = h[at(n, n - 1)] * h[at(n - 1, n)];

            if iter != 0 && iter.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
                // Wilkinson's ad hoc exceptional shift.
                exshift += x;
                for i in 0..=n {
                    h[at(i, i)] -= x;
                }
                s = h[at(n, n - 1)].abs() + h[at(n - 1, n - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            iter += 1;
            total_iter += 1;
            if total_iter > budget {
                return Err(Error::NoConvergence {
                    what: "real QR iteration",
                    budget,
                });
            }

            // Look for two consecutive small subdiagonal elements.
            let mut m = n - 2;
            loop {
                z = h[at(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[at(m + 1, m)] + h[at(m, m + 1)];
                q = h[at(m + 1, m + 1)] - z - r - s;
                r = h[at(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[at(m, m - 1)].abs() * (q.abs() + r.abs())
                    < DEFLATION_EPS
                        * (p.abs()
                            * (h[at(m - 1, m - 1)].abs() + z.abs() + h[at(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=n {
                h[at(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[at(i, i - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=n, columns m..=n.
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[at(k, k - 1)];
                    q = h[at(k + 1, k - 1)];
                    r = if notlast { h[at(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[at(k, k - 1)] = -s * x;
                } else if l != m {
                    h[at(k, k - 1)] = -h[at(k, k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                for j in k..nn {
                    p = h[at(k, j)] + q * h[at(k + 1, j)];
                    if notlast {
                        p += r * h[at(k + 2, j)];
                        h[at(k + 2, j)] -= p * z;
                    }
                    h[at(k, j)] -= p * x;
                    h[at(k + 1, j)] -= p * y;
                }
                let top = n.min(k + 3);
                for i in 0..=top {
                    p = x * h[at(i, k)] + y * h[at(i, k + 1)];
                    if notlast {
                        p += z * h[at(i, k + 2)];
                        h[at(i, k + 2)] -= p * r;
                    }
                    h[at(i, k)] -= p;
                    h[at(i, k + 1)] -= p * q;
                }
            }
        }
    }
    Ok((d, e, total_iter))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(rows: &[Vec<f64>]) -> Vec<Complex64> {
        let n = rows.len();
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let (mut v, _) = real_eigenvalues(flat, n, 50 * n).unwrap();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_passthrough() {
        let v = eig(&[vec![3.0, 0.0], vec![0.0, -1.0]]);
        assert!((v[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((v[1] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn badly_scaled_matrix_balances_out() {
        // D A D^-1 with wild diagonal scaling; eigenvalues are 1 and 2.
        let v = eig(&[vec![1.0, 1e9], vec![1e-9, 2.0]]);
        let prod = (v[0] * v[1]).re;
        let sum = (v[0] + v[1]).re;
        assert!((sum - 3.0).abs() < 1e-9, "trace {sum}");
        assert!((prod - 1.0).abs() < 1e-9, "det {prod}");
    }

    #[test]
    fn upper_triangular_spectrum_is_diagonal() {
        let v = eig(&[
            vec![1.0, 5.0, -3.0],
            vec![0.0, 4.0, 2.0],
            vec![0.0, 0.0, -2.0],
        ]);
        let want = [-2.0, 1.0, 4.0];
        for (g, w) in v.iter().zip(want) {
            assert!((g - Complex64::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_pairs_come_out_paired() {
        // Block diag of two rotations scaled differently.
        let v = eig(&[
            vec![0.0, -2.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, -3.0],
            vec![0.0, 0.0, 3.0, 1.0],
        ]);
        let mut ims: Vec<f64> = v.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        let want_im = [-3.0, -2.0, 2.0, 3.0];
        for (g, w) in ims.iter().zip(want_im) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}
