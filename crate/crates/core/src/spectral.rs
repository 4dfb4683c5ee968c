//! Empirical spectral measures, reference limit laws, and the identities
//! connecting eigenvalues to singular values.
//!
//! The central object is [`EmpiricalMeasure`], the uniform atomic measure
//! on a matrix spectrum. Comparisons against the reference laws (uniform
//! unit disk, semicircle) go through two-dimensional rectangle CDFs
//! evaluated on a lattice; both laws have closed-form rectangle masses, so
//! no quadrature is involved anywhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::Error;
use crate::linalg;
use crate::matrix::DenseMatrix;
use crate::Result;

/// Minimum admissible distance from an evaluation point to the spectrum.
/// Inside that guard the resolvent-style quantities are refused rather
/// than returned as huge unstable numbers.
pub const PSEUDOSPECTRUM_GUARD: f64 = 1e-9;

/// Atom-count cap for the exact (lattice-free) distance mode.
pub const MAX_EXACT_DISTANCE_ATOMS: usize = 500;

/// Default lattice resolution for [`measure_distance`].
pub const DEFAULT_DISTANCE_GRID: usize = 64;

/// Uniform atomic measure: every atom carries mass `1 / count`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    atoms: Vec<Complex64>,
}

impl EmpiricalMeasure {
    /// Wraps a nonempty list of finite atoms.
    pub fn new(atoms: Vec<Complex64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter(
                "measure needs at least one atom".into(),
            ));
        }
        if atoms.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "measure atoms must be finite".into(),
            ));
        }
        Ok(Self { atoms })
    }

    pub fn count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[Complex64] {
        &self.atoms
    }

    /// Mass of the southwest rectangle `{Re <= s, Im <= t}`: the
    /// two-dimensional CDF evaluated at `(s, t)`.
    pub fn rectangle_mass(&self, s: f64, t: f64) -> f64 {
        let hits = self
            .atoms
            .iter()
            .filter(|z| z.re <= s && z.im <= t)
            .count();
        hits as f64 / self.atoms.len() as f64
    }

    /// Mass of the centered disk `{|z| <= r}`.
    pub fn disk_mass(&self, r: f64) -> f64 {
        let hits = self.atoms.iter().filter(|z| z.norm() <= r).count();
        hits as f64 / self.atoms.len() as f64
    }

    /// CSV serialization: header `re,im`, one atom per row, 17 significant
    /// digits so parsing the file reproduces the exact doubles.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for z in &self.atoms {
            out.push_str(&format!("{:.16e},{:.16e}\n", z.re, z.im));
        }
        out
    }

    /// JSON serialization: `{"count": n, "atoms": [[re, im], ...]}`.
    pub fn to_json(&self) -> String {
        let atoms: Vec<[f64; 2]> = self.atoms.iter().map(|z| [z.re, z.im]).collect();
        serde_json::json!({ "count": self.atoms.len(), "atoms": atoms }).to_string()
    }

    fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for z in &self.atoms {
            xmin = xmin.min(z.re);
            xmax = xmax.max(z.re);
            ymin = ymin.min(z.im);
            ymax = ymax.max(z.im);
        }
        (xmin, xmax, ymin, ymax)
    }
}

/// Reference limit laws with closed-form masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceLaw {
    /// Uniform density `1/pi` on the closed unit disk.
    CircularUnit,
    /// Density `(1/2pi) sqrt(4 - x^2)` on `[-2, 2]` of the real line.
    Semicircle,
}

/// Regions whose reference-law mass has a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Centered disk of the given radius.
    Disk { radius: f64 },
    /// Southwest rectangle `{Re <= s, Im <= t}`.
    Rectangle { s: f64, t: f64 },
}

impl ReferenceLaw {
    /// Exact analytic mass of a region. Disk regions pair only with the
    /// circular law; rectangles work for both (the semicircle lives on the
    /// real axis, so its rectangle mass is the one-dimensional CDF at `s`
    /// whenever `t >= 0` and zero otherwise).
    pub fn mass(&self, region: Region) -> Result<f64> {
        match (self, region) {
            (ReferenceLaw::CircularUnit, Region::Disk { radius }) => {
                if !(radius >= 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "disk radius must be nonnegative and finite, got {radius}"
                    )));
                }
                Ok(radius.min(1.0).powi(2))
            }
            (ReferenceLaw::CircularUnit, Region::Rectangle { s, t }) => {
                Ok(disk_rectangle_mass(s, t))
            }
            (ReferenceLaw::Semicircle, Region::Rectangle { s, t }) => {
                Ok(if t >= 0.0 { semicircle_cdf(s) } else { 0.0 })
            }
            (ReferenceLaw::Semicircle, Region::Disk { .. }) => Err(Error::InvalidParameter(
                "disk regions only pair with the circular law".into(),
            )),
        }
    }

    fn rect_cdf(&self, s: f64, t: f64) -> f64 {
        match self {
            ReferenceLaw::CircularUnit => disk_rectangle_mass(s, t),
            ReferenceLaw::Semicircle => {
                if t >= 0.0 {
                    semicircle_cdf(s)
                } else {
                    0.0
                }
            }
        }
    }

    fn support_box(&self) -> (f64, f64, f64, f64) {
        match self {
            ReferenceLaw::CircularUnit => (-1.0, 1.0, -1.0, 1.0),
            ReferenceLaw::Semicircle => (-2.0, 2.0, 0.0, 0.0),
        }
    }
}

/// CDF of the semicircle density `(1/2pi) sqrt(4 - x^2)` on `[-2, 2]`:
/// `1/2 + x sqrt(4 - x^2) / (4 pi) + arcsin(x/2) / pi`, clamped to `[0, 1]`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    let value = 0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI;
    value.clamp(0.0, 1.0)
}

/// Mass of `{Re <= s, Im <= t}` under the uniform unit-disk law.
///
/// The integrand over `x` is the length of the chord of the disk below
/// `y = t`, which changes form at `|x| = sqrt(1 - t^2)`; both pieces have
/// the elementary antiderivative `G(x) = (x sqrt(1-x^2) + arcsin x) / 2`.
fn disk_rectangle_mass(s: f64, t: f64) -> f64 {
    if s <= -1.0 || t <= -1.0 {
        return 0.0;
    }
    let g = |x: f64| {
        let xc = x.clamp(-1.0, 1.0);
        0.5 * (xc * (1.0 - xc * xc).max(0.0).sqrt() + xc.asin())
    };
    // Integral of the full chord 2 sqrt(1-x^2) over [a, b].
    let full = |a: f64, b: f64| if b > a { 2.0 * (g(b) - g(a)) } else { 0.0 };
    // Integral of the truncated chord t + sqrt(1-x^2) over [a, b].
    let partial = |a: f64, b: f64| if b > a { t * (b - a) + g(b) - g(a) } else { 0.0 };

    let u = s.min(1.0);
    let area = if t >= 1.0 {
        full(-1.0, u)
    } else {
        let xt = (1.0 - t * t).max(0.0).sqrt();
        if t >= 0.0 {
            full(-1.0, u.min(-xt)) + partial(-xt, u.min(xt)) + full(xt, u)
        } else {
            partial(-xt, u.min(xt))
        }
    };
    (area / PI).clamp(0.0, 1.0)
}

/// Empirical spectral distribution of a square matrix: the uniform atomic
/// measure on its eigenvalues, of `A / sqrt(n)` when `normalize` is set.
/// `tol` is the eigensolver residual tolerance.
pub fn esd(a: &DenseMatrix, normalize: bool, tol: f64) -> Result<EmpiricalMeasure> {
    let spectrum = if normalize {
        let n = a.rows().max(1) as f64;
        let scaled = a.scale(Complex64::new(1.0 / n.sqrt(), 0.0));
        linalg::eigenvalues(&scaled, tol)?
    } else {
        linalg::eigenvalues(a, tol)?
    };
    EmpiricalMeasure::new(spectrum.eigenvalues)
}

/// Either side of a measure comparison: an empirical measure or a
/// reference law.
#[derive(Debug, Clone, Copy)]
pub enum MeasureInput<'a> {
    Empirical(&'a EmpiricalMeasure),
    Law(ReferenceLaw),
}

impl<'a> From<&'a EmpiricalMeasure> for MeasureInput<'a> {
    fn from(m: &'a EmpiricalMeasure) -> Self {
        MeasureInput::Empirical(m)
    }
}

impl From<ReferenceLaw> for MeasureInput<'static> {
    fn from(law: ReferenceLaw) -> Self {
        MeasureInput::Law(law)
    }
}

impl MeasureInput<'_> {
    fn rect_cdf(&self, s: f64, t: f64) -> f64 {
        match self {
            MeasureInput::Empirical(m) => m.rectangle_mass(s, t),
            MeasureInput::Law(law) => law.rect_cdf(s, t),
        }
    }

    fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match self {
            MeasureInput::Empirical(m) => m.bounding_box(),
            MeasureInput::Law(law) => law.support_box(),
        }
    }
}

/// Largest rectangle-CDF discrepancy over a `grid x grid` lattice spanning
/// the union of the two inputs' bounding boxes (endpoints included).
///
/// This is the lattice surrogate for the sup over all southwest rectangles:
/// a pseudometric for fixed lattice, zero on identical inputs.
pub fn measure_distance(mu: MeasureInput, nu: MeasureInput, grid: usize) -> Result<f64> {
    if grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "lattice needs at least 2 points per side, got {grid}"
        )));
    }
    let (ax0, ax1, ay0, ay1) = mu.bounding_box();
    let (bx0, bx1, by0, by1) = nu.bounding_box();
    let (x0, x1) = (ax0.min(bx0), ax1.max(bx1));
    let (y0, y1) = (ay0.min(by0), ay1.max(by1));
    let steps = (grid - 1) as f64;
    let mut worst = 0.0f64;
    for i in 0..grid {
        let s = x0 + (x1 - x0) * i as f64 / steps;
        for j in 0..grid {
            let t = y0 + (y1 - y0) * j as f64 / steps;
            let gap = (mu.rect_cdf(s, t) - nu.rect_cdf(s, t)).abs();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

/// Exact sup of the rectangle-CDF discrepancy between two empirical
/// measures. Both CDFs are piecewise constant with jumps only at atom
/// coordinates, so the sup is attained on the product of the two atom
/// coordinate sets; capped at [`MAX_EXACT_DISTANCE_ATOMS`] atoms per side.
pub fn measure_distance_exact(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
) -> Result<f64> {
    let largest = mu.count().max(nu.count());
    if largest > MAX_EXACT_DISTANCE_ATOMS {
        return Err(Error::BudgetExceeded {
            what: "exact distance atom count",
            needed: largest as u128,
            cap: MAX_EXACT_DISTANCE_ATOMS as u128,
        });
    }
    let mut xs: Vec<f64> = mu
        .atoms()
        .iter()
        .chain(nu.atoms())
        .map(|z| z.re)
        .collect();
    let mut ys: Vec<f64> = mu
        .atoms()
        .iter()
        .chain(nu.atoms())
        .map(|z| z.im)
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    // Per-measure atom counts on the coordinate lattice, then 2-D prefix
    // sums turn them into CDF values.
    let cdf_table = |m: &EmpiricalMeasure| -> Vec<f64> {
        let mut cell = vec![0.0f64; xs.len() * ys.len()];
        for z in m.atoms() {
            let i = xs.partition_point(|&x| x < z.re);
            let j = ys.partition_point(|&y| y < z.im);
            cell[i * ys.len() + j] += 1.0;
        }
        for i in 0..xs.len() {
            for j in 0..ys.len() {
                let mut acc = cell[i * ys.len() + j];
                if i > 0 {
                    acc += cell[(i - 1) * ys.len() + j];
                }
                if j > 0 {
                    acc += cell[i * ys.len() + j - 1];
                }
                if i > 0 && j > 0 {
                    acc -= cell[(i - 1) * ys.len() + j - 1];
                }
                cell[i * ys.len() + j] = acc;
            }
        }
        let total = m.count() as f64;
        for v in cell.iter_mut() {
            *v /= total;
        }
        cell
    };
    let fa = cdf_table(mu);
    let fb = cdf_table(nu);
    let worst = fa
        .iter()
        .zip(&fb)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(worst)
}

/// Stieltjes transform `(1/count) sum 1/(atom - z)`.
///
/// Refuses evaluation points within [`PSEUDOSPECTRUM_GUARD`] of any atom.
pub fn stieltjes(mu: &EmpiricalMeasure, z: Complex64) -> Result<Complex64> {
    let separation = mu
        .atoms()
        .iter()
        .map(|lambda| (lambda - z).norm())
        .fold(f64::INFINITY, f64::min);
    if separation < PSEUDOSPECTRUM_GUARD {
        return Err(Error::PseudospectrumProximity {
            context: "stieltjes evaluation point",
            separation,
            guard: PSEUDOSPECTRUM_GUARD,
        });
    }
    let sum: Complex64 = mu.atoms().iter().map(|lambda| 1.0 / (lambda - z)).sum();
    Ok(sum / mu.count() as f64)
}

/// Squared-singular-value measure of the shifted normalized matrix: atoms
/// are the squares of the singular values of `M / sqrt(n) - zI`, mass
/// `1/n` each. All atoms are nonnegative reals.
pub fn eta_measure(m: &DenseMatrix, z: Complex64) -> Result<EmpiricalMeasure> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows().max(1) as f64;
    let shifted = m
        .scale(Complex64::new(1.0 / n.sqrt(), 0.0))
        .shift_diagonal(z)?;
    let sigma = linalg::singular_values(&shifted)?;
    EmpiricalMeasure::new(
        sigma
            .into_iter()
            .map(|s| Complex64::new(s * s, 0.0))
            .collect(),
    )
}

/// Both sides of the log-determinant identity, which ties the eigenvalue
/// and singular-value decompositions of the same shifted matrix together.
#[derive(Debug, Clone, Copy)]
pub struct LogDetReport {
    /// `(1/n) sum log|lambda_i - z|` over eigenvalues of `M / sqrt(n)`.
    pub via_eigen: f64,
    /// `(1/2n) sum log(sigma_i^2)` over singular values of `M/sqrt(n) - zI`.
    pub via_eta: f64,
    /// `|via_eigen - via_eta|`.
    pub abs_err: f64,
}

/// Evaluates `log |det(M/sqrt(n) - zI)| / n` along two independent
/// decomposition paths. `z` must keep [`PSEUDOSPECTRUM_GUARD`] distance
/// from the spectrum of `M / sqrt(n)`.
pub fn log_det_identity_check(m: &DenseMatrix, z: Complex64) -> Result<LogDetReport> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows().max(1) as f64;
    let scaled = m.scale(Complex64::new(1.0 / n.sqrt(), 0.0));
    let spectrum = linalg::eigenvalues(&scaled, 1e-9)?;
    let separation = spectrum
        .eigenvalues
        .iter()
        .map(|lambda| (lambda - z).norm())
        .fold(f64::INFINITY, f64::min);
    if separation < PSEUDOSPECTRUM_GUARD {
        return Err(Error::PseudospectrumProximity {
            context: "log-determinant shift",
            separation,
            guard: PSEUDOSPECTRUM_GUARD,
        });
    }
    let via_eigen = spectrum
        .eigenvalues
        .iter()
        .map(|lambda| (lambda - z).norm().ln())
        .sum::<f64>()
        / n;
    let shifted = scaled.shift_diagonal(z)?;
    let sigma = linalg::singular_values(&shifted)?;
    // log(sigma^2)/2 summed as log sigma: same value, immune to underflow
    // of the explicit square.
    let via_eta = sigma.iter().map(|s| s.ln()).sum::<f64>() / n;
    Ok(LogDetReport {
        via_eigen,
        via_eta,
        abs_err: (via_eigen - via_eta).abs(),
    })
}

/// Unnormalized log of the complex Ginibre eigenvalue density:
/// `sum_{i<j} 2 log|l_i - l_j| - n sum |l_i|^2`, and negative infinity
/// when two inputs coincide.
///
/// The normalizing constant is not modeled, so `drop_constant` must be
/// set. Terms are accumulated in sorted order, making the result exactly
/// invariant under permutation of the inputs.
pub fn ginibre_log_density(lambdas: &[Complex64], drop_constant: bool) -> Result<f64> {
    if !drop_constant {
        return Err(Error::InvalidParameter(
            "normalizing constant unavailable; call with drop_constant = true".into(),
        ));
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter(
            "density needs at least one eigenvalue".into(),
        ));
    }
    let n = lambdas.len();
    let mut terms = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (lambdas[i] - lambdas[j]).norm();
            if gap == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            terms.push(2.0 * gap.ln());
        }
    }
    for lambda in lambdas {
        terms.push(-(n as f64) * lambda.norm_sqr());
    }
    terms.sort_by(f64::total_cmp);
    Ok(terms.iter().sum())
}
