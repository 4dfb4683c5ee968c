//! Complex nonsymmetric eigenvalues: balance, unitary Householder reduction
//! to upper Hessenberg form, then explicitly shifted QR iteration built from
//! complex Givens rotations, following the classical `cbal`/`comhes`/`comqr`
//! lineage, eigenvalues only.

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::Result;

use super::{DEFLATION_EPS, EXCEPTIONAL_SHIFT_PERIOD};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues of a general complex square matrix.
pub fn complex_eigenvalues(
    a: &DenseMatrix,
    budget: usize,
) -> Result<(Vec<Complex64>, usize)> {
    let n = a.rows();
    let mut h = a.data().to_vec();
    if n == 1 {
        return Ok((vec![h[0]], 0));
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);
    qr_values(&mut h, n, budget)
}

/// One-norm proxy used throughout: cheap and sufficient for equilibration
/// and deflation thresholds.
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity with exact powers of two equalizing row and column
/// one-norms; the spectrum is untouched.
fn balance(h: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    let b2 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(h[j * n + i]);
                    r += cabs1(h[i * n + j]);
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

/// Unitary reduction to upper Hessenberg form with complex Householder
/// reflectors `I - beta u u^H`, transforms not accumulated.
fn hessenberg(h: &mut [Complex64], n: usize) {
    let mut u = vec![ZERO; n];
    for m in 1..(n - 1) {
        let x0 = h[m * n + (m - 1)];
        let mut norm2 = x0.norm_sqr();
        let mut below2 = 0.0;
        for i in (m + 1)..n {
            below2 += h[i * n + (m - 1)].norm_sqr();
        }
        norm2 += below2;
        if below2 == 0.0 {
            continue;
        }
        let norm = norm2.sqrt();
        // gamma = -phase(x0) * norm so that u^H x = norm2 + norm |x0| is
        // real and positive.
        let gamma = if x0 == ZERO {
            Complex64::new(-norm, 0.0)
        } else {
            -(x0 / x0.norm()) * norm
        };
        let beta = 1.0 / (norm2 + norm * x0.norm());
        u[m] = x0 - gamma;
        for i in (m + 1)..n {
            u[i] = h[i * n + (m - 1)];
        }

        // Left: rows m..n of columns m-1..n get H = (I - beta u u^H) A.
        for j in (m - 1)..n {
            let mut s = ZERO;
            for i in m..n {
                s += u[i].conj() * h[i * n + j];
            }
            s *= beta;
            for i in m..n {
                h[i * n + j] -= s * u[i];
            }
        }
        // Right: columns m..n of every row get A (I - beta u u^H).
        for i in 0..n {
            let mut s = ZERO;
            for j in m..n {
                s += h[i * n + j] * u[j];
            }
            s *= beta;
            for j in m..n {
                h[i * n + j] -= s * u[j].conj();
            }
        }
        // The annihilated column is exact by construction.
        h[m * n + (m - 1)] = gamma;
        for i in (m + 1)..n {
            h[i * n + (m - 1)] = ZERO;
        }
    }
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` with `c` real,
/// mapping `(a, b)` to `(r', 0)` with `|r'| = hypot(|a|, |b|)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * (b.conj() / r))
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 block closer to the
/// bottom corner entry.
fn wilkinson_shift(h: &[Complex64], n: usize, nn: usize) -> Complex64 {
    let a = h[(nn - 1) * n + (nn - 1)];
    let b = h[(nn - 1) * n + nn];
    let c = h[nn * n + (nn - 1)];
    let d = h[nn * n + nn];
    let mid = (a + d) * 0.5;
    let delta = (a - d) * 0.5;
    let sq = (delta * delta + b * c).sqrt();
    let r1 = mid + sq;
    let r2 = mid - sq;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Explicitly shifted QR iteration on an upper Hessenberg matrix.
///
/// Subdiagonal entries deflate at relative size [`DEFLATION_EPS`]; an
/// exceptional real shift built from the two lowest subdiagonals fires
/// every [`EXCEPTIONAL_SHIFT_PERIOD`] stalled iterations; exceeding
/// `budget` total iterations is an error.
fn qr_values(
    h: &mut [Complex64],
    n: usize,
    budget: usize,
) -> Result<(Vec<Complex64>, usize)> {
    let mut eigenvalues = vec![ZERO; n];
    let mut norm_all = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            norm_all += cabs1(h[i * n + j]);
        }
    }
    if norm_all == 0.0 {
        return Ok((eigenvalues, 0));
    }

    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let mut nn = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    loop {
        // Find the start of the trailing fully coupled block.
        let mut l = nn;
        while l > 0 {
            let mut s = cabs1(h[(l - 1) * n + (l - 1)]) + cabs1(h[l * n + l]);
            if s == 0.0 {
                s = norm_all;
            }
            if cabs1(h[l * n + (l - 1)]) <= DEFLATION_EPS * s {
                h[l * n + (l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }

        if l == nn {
            eigenvalues[nn] = h[nn * n + nn];
            if nn == 0 {
                break;
            }
            nn -= 1;
            iter = 0;
            continue;
        }
        if l == nn - 1 {
            let a = h[(nn - 1) * n + (nn - 1)];
            let b = h[(nn - 1) * n + nn];
            let c = h[nn * n + (nn - 1)];
            let d = h[nn * n + nn];
            let mid = (a + d) * 0.5;
            let sq = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            eigenvalues[nn - 1] = mid + sq;
            eigenvalues[nn] = mid - sq;
            if nn == 1 {
                break;
            }
            nn -= 2;
            iter = 0;
            continue;
        }

        let sigma = if iter != 0 && iter.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
            Complex64::new(
                h[nn * n + (nn - 1)].norm() + h[(nn - 1) * n + (nn - 2)].norm(),
                0.0,
            )
        } else {
            wilkinson_shift(h, n, nn)
        };
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence {
                what: "complex QR iteration",
                budget,
            });
        }

        for i in l..=nn {
            h[i * n + i] -= sigma;
        }
        // QR factorization of the active block by rotations on row pairs.
        rotations.clear();
        for i in l..nn {
            let (c, s) = givens(h[i * n + i], h[(i + 1) * n + i]);
            rotations.push((c, s));
            for j in i..=nn {
                let x = h[i * n + j];
                let y = h[(i + 1) * n + j];
                h[i * n + j] = c * x + s * y;
                h[(i + 1) * n + j] = -s.conj() * x + c * y;
            }
            h[(i + 1) * n + i] = ZERO;
        }
        // Multiply back on the right: H <- R Q + sigma I.
        for (k, i) in (l..nn).enumerate() {
            let (c, s) = rotations[k];
            for r in l..=(i + 1) {
                let x = h[r * n + i];
                let y = h[r * n + (i + 1)];
                h[r * n + i] = c * x + s.conj() * y;
                h[r * n + (i + 1)] = -s * x + c * y;
            }
        }
        for i in l..=nn {
            h[i * n + i] += sigma;
        }
    }
    Ok((eigenvalues, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eig(rows: &[Vec<Complex64>], budget: usize) -> Vec<Complex64> {
        let a = DenseMatrix::from_rows(rows).unwrap();
        let (mut v, _) = complex_eigenvalues(&a, budget).unwrap();
        v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        v
    }

    #[test]
    fn complex_diagonal_passthrough() {
        let v = eig(
            &[
                vec![c(1.0, 2.0), ZERO],
                vec![ZERO, c(-3.0, 0.5)],
            ],
            100,
        );
        assert!((v[0] - c(-3.0, 0.5)).norm() < 1e-14);
        assert!((v[1] - c(1.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn known_quadratic_spectrum() {
        // [[1+i, 2], [3, 1-i]]: trace 2, det -4, eigenvalues 1 +- sqrt(5).
        let v = eig(
            &[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(1.0, -1.0)]],
            100,
        );
        let s5 = 5f64.sqrt();
        assert!((v[0] - c(1.0 - s5, 0.0)).norm() < 1e-12);
        assert!((v[1] - c(1.0 + s5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn three_by_three_with_known_trace_and_det() {
        // Companion matrix of z^3 - (3+3i) z^2 + ... built from roots
        // {i, 2, 1+2i}: verify the solved spectrum matches the roots.
        let roots = [c(0.0, 1.0), c(2.0, 0.0), c(1.0, 2.0)];
        let e1 = roots[0] + roots[1] + roots[2];
        let e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        let e3 = roots[0] * roots[1] * roots[2];
        let v = eig(
            &[
                vec![e1, -e2, e3],
                vec![c(1.0, 0.0), ZERO, ZERO],
                vec![ZERO, c(1.0, 0.0), ZERO],
            ],
            150,
        );
        let mut want = roots.to_vec();
        want.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        for (g, w) in v.iter().zip(want) {
            assert!((g - w).norm() < 1e-11, "{g} vs {w}");
        }
    }

    #[test]
    fn budget_zero_fails_on_coupled_matrix() {
        let a = DenseMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(1.0, 0.0), ZERO],
            vec![c(1.0, 1.0), ZERO, c(2.0, 0.0)],
            vec![ZERO, c(0.5, -0.5), c(1.0, -1.0)],
        ])
        .unwrap();
        assert!(matches!(
            complex_eigenvalues(&a, 0),
            Err(Error::NoConvergence { .. })
        ));
    }
}
