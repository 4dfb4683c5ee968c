//! Smoothed-analysis experiments: condition-number tails under random
//! perturbation, row-to-span distances at fixed codimension, and the
//! row-truncation bound between matched singular values.

use num_complex::Complex64;

use crate::ensemble::{sample_matrix, EntryDistribution};
use crate::error::Error;
use crate::linalg;
use crate::matrix::DenseMatrix;
use crate::Result;

/// Tolerance on `| ||v|| - 1 |` for hyperplane normals.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Empirical survival function of `1 / sigma_min(A + M)` over random
/// perturbations `M`, with the matching `sqrt(n)/x` reference curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    /// Ascending evaluation thresholds.
    pub x_grid: Vec<f64>,
    /// `survival[j]` = fraction of trials with `1/sigma_min >= x_grid[j]`.
    pub survival: Vec<f64>,
    pub trials: u64,
    /// `sqrt(n) / x` on the same grid.
    pub bound_curve: Vec<f64>,
    /// Trials whose decomposition did not converge. They are counted as
    /// exceeding every threshold rather than dropped.
    pub failed_trials: Vec<u64>,
}

/// Runs `trials` perturbations `A + M` with iid entries of `dist` in `M`
/// and tabulates how often the inverse smallest singular value exceeds
/// each grid point. Exactly singular outcomes count as exceeding every
/// threshold. Zero-variance perturbations are rejected: they cannot smooth
/// anything.
pub fn condition_tail(
    a: &DenseMatrix,
    dist: &EntryDistribution,
    x_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailReport> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    validate_grid(x_grid)?;
    dist.validate()?;
    if dist.variance() == 0.0 {
        return Err(Error::InvalidParameter(
            "perturbation distribution has zero variance".into(),
        ));
    }

    let n = a.rows();
    let mut inverses = Vec::with_capacity(trials as usize);
    let mut failed_trials = Vec::new();
    for trial in 0..trials {
        let m = sample_matrix(dist, n, seed, trial)?;
        let perturbed = a.add(&m)?;
        let inv = match linalg::smallest_singular_value(&perturbed) {
            Ok(0.0) => f64::INFINITY,
            Ok(s) => 1.0 / s,
            Err(_) => {
                failed_trials.push(trial);
                f64::INFINITY
            }
        };
        inverses.push(inv);
    }

    let survival = x_grid
        .iter()
        .map(|&x| inverses.iter().filter(|&&v| v >= x).count() as f64 / trials as f64)
        .collect();
    let bound_curve = x_grid.iter().map(|&x| (n as f64).sqrt() / x).collect();
    Ok(TailReport {
        x_grid: x_grid.to_vec(),
        survival,
        trials,
        bound_curve,
        failed_trials,
    })
}

fn validate_grid(x_grid: &[f64]) -> Result<()> {
    if x_grid.is_empty() {
        return Err(Error::InvalidParameter("x_grid must be nonempty".into()));
    }
    if x_grid.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::InvalidParameter(
            "x_grid entries must be positive and finite".into(),
        ));
    }
    if x_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "x_grid must be sorted ascending".into(),
        ));
    }
    Ok(())
}

/// Distance from the shifted sign vector `a + xi` to the hyperplane
/// through the origin with unit normal `v`: `|sum v_i (a_i + xi_i)|`.
///
/// `xi` entries must be exactly plus or minus one and `v` must be unit
/// length within [`UNIT_NORM_TOL`].
pub fn hyperplane_distance(a: &[f64], v_normal: &[f64], xi: &[f64]) -> Result<f64> {
    if a.is_empty() || a.len() != v_normal.len() || a.len() != xi.len() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "hyperplane distance: |a| = {}, |v| = {}, |xi| = {}",
                a.len(),
                v_normal.len(),
                xi.len()
            ),
        });
    }
    if xi.iter().any(|&s| s != 1.0 && s != -1.0) {
        return Err(Error::InvalidParameter(
            "xi entries must be exactly +1 or -1".into(),
        ));
    }
    let norm = v_normal.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidParameter(format!(
            "normal vector must be unit length, got norm {norm}"
        )));
    }
    Ok(v_normal
        .iter()
        .zip(a.iter().zip(xi))
        .map(|(v, (ai, xii))| v * (ai + xii))
        .sum::<f64>()
        .abs())
}

/// Row-to-span distances at codimension about `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    /// One distance per trial, in trial order.
    pub distances: Vec<f64>,
    /// `(1/100) sqrt(k/n)`, the floor the distances are compared against.
    pub threshold: f64,
}

/// Samples `trials` matrices with iid `dist` entries scaled by
/// `1/sqrt(n)` and records the distance from the first row to the span of
/// the next `n - k - 1` rows.
///
/// With `enforce_lemma_floor` the codimension must satisfy
/// `k >= ceil(4 ln n)`, the hypothesis under which the recorded distances
/// are expected to clear the reported threshold; without it any
/// `1 <= k < n` is accepted for exploration.
pub fn distance_experiment(
    n: usize,
    k: usize,
    dist: &EntryDistribution,
    trials: u64,
    seed: u64,
    enforce_lemma_floor: bool,
) -> Result<DistanceReport> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n, got n = {n}, k = {k}"
        )));
    }
    if enforce_lemma_floor {
        let floor = (4.0 * (n as f64).ln()).ceil() as usize;
        if k < floor {
            return Err(Error::InvalidParameter(format!(
                "codimension floor: k = {k} is below ceil(4 ln {n}) = {floor}"
            )));
        }
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    dist.validate()?;

    let normalizer = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let span_rows = n - k - 1;
    let mut distances = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let m = sample_matrix(dist, n, seed, trial)?.scale(normalizer);
        let span = DenseMatrix::from_fn(span_rows, n, |i, j| m.get(i + 1, j));
        let query = m.row(0).to_vec();
        distances.push(linalg::distance_to_span(&span, &query)?);
    }
    let threshold = 0.01 * (k as f64 / n as f64).sqrt();
    Ok(DistanceReport {
        n,
        k,
        trials,
        distances,
        threshold,
    })
}

/// Truncation comparison of matched singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTailBound {
    /// Singular value at depth `n - k` counted up from the smallest of
    /// the full matrix, i.e. the (k+1)-th largest.
    pub lhs: f64,
    /// Same depth `m - k` from the smallest of `A'` = `A` without its
    /// last `k` rows, `m = n - k`: again the (k+1)-th largest.
    pub rhs: f64,
    /// `k / sqrt((n-k) n)`, the scale the gap is usually plotted against.
    pub reference: f64,
}

/// Computes both sides of the row-truncation bound: dropping `k` of the
/// `n` rows cannot raise the (k+1)-th largest singular value, so
/// `lhs >= rhs` up to roundoff, for every input. Requires `1 <= k < n/2`
/// so that the truncated side still has that index.
pub fn sigma_tail_bound_check(a: &DenseMatrix, k: usize) -> Result<SigmaTailBound> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if k == 0 || 2 * k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n/2, got n = {n}, k = {k}"
        )));
    }
    let sigma = linalg::singular_values(a)?;
    let lhs = sigma[k];
    let truncated = linalg::truncate_rows(a, k)?;
    let sigma_cut = linalg::singular_values(&truncated)?;
    let m = n - k;
    let rhs = sigma_cut[k];
    let reference = k as f64 / ((m as f64) * (n as f64)).sqrt();
    Ok(SigmaTailBound {
        lhs,
        rhs,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::DiscreteAtom;
    use crate::rng::trial_rng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn signed_atoms(magnitude: f64) -> EntryDistribution {
        EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom {
                    value: Complex64::new(magnitude, 0.0),
                    numerator: 1,
                    denominator: 2,
                },
                DiscreteAtom {
                    value: Complex64::new(-magnitude, 0.0),
                    numerator: 1,
                    denominator: 2,
                },
            ],
        }
    }

    // ---- condition tails ----

    #[test]
    fn one_by_one_bernoulli_tail_is_a_step() {
        // A = 0, M = ±1: 1/sigma_min is always exactly 1.
        let rep = condition_tail(
            &DenseMatrix::zeros(1, 1),
            &EntryDistribution::BernoulliSym,
            &[0.5, 1.0, 2.0],
            16,
            3,
        )
        .unwrap();
        assert_eq!(rep.survival, vec![1.0, 1.0, 0.0]);
        assert!(rep.failed_trials.is_empty());
        assert!((rep.bound_curve[0] - 2.0).abs() < 1e-15);
        assert!((rep.bound_curve[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tail_is_deterministic_per_seed() {
        let a = DenseMatrix::identity(6).scale(Complex64::new(3.0, 0.0));
        let grid = [1.0, 4.0, 16.0];
        let run = || {
            condition_tail(&a, &EntryDistribution::RealGaussian, &grid, 40, 77).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn survival_is_monotone_and_bounded() {
        let a = sample_matrix(&EntryDistribution::RealGaussian, 8, 42, 0).unwrap();
        let rep = condition_tail(
            &a,
            &EntryDistribution::RealGaussian,
            &[0.25, 1.0, 4.0, 16.0, 64.0],
            60,
            9,
        )
        .unwrap();
        for pair in rep.survival.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
        for s in &rep.survival {
            assert!((0.0..=1.0).contains(s));
        }
    }

    #[test]
    fn zero_variance_perturbation_is_rejected() {
        let point_mass = EntryDistribution::DiscreteCustom {
            atoms: vec![DiscreteAtom {
                value: Complex64::new(1.0, 0.0),
                numerator: 1,
                denominator: 1,
            }],
        };
        let err = condition_tail(
            &DenseMatrix::zeros(2, 2),
            &point_mass,
            &[1.0],
            4,
            0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn bad_grids_are_rejected() {
        let a = DenseMatrix::zeros(2, 2);
        let d = EntryDistribution::BernoulliSym;
        assert!(condition_tail(&a, &d, &[], 4, 0).is_err());
        assert!(condition_tail(&a, &d, &[1.0, 0.5], 4, 0).is_err());
        assert!(condition_tail(&a, &d, &[-1.0, 2.0], 4, 0).is_err());
    }

    #[test]
    fn two_by_two_sign_matrices_are_singular_half_the_time() {
        // All 16 sign matrices: ad = bc in exactly 8 of them.
        let mut singular = 0usize;
        let mut total = 0usize;
        for mask in 0..16u32 {
            let pick = |bit: u32| if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
            let a = DenseMatrix::from_real_rows(&[
                vec![pick(0), pick(1)],
                vec![pick(2), pick(3)],
            ])
            .unwrap();
            if linalg::smallest_singular_value(&a).unwrap() == 0.0 {
                singular += 1;
            }
            total += 1;
        }
        assert_eq!(total, 16);
        assert_eq!(singular, 8);
    }

    // ---- hyperplane distances ----

    #[test]
    fn hyperplane_distance_matches_span_projection() {
        // Independent oracle: the hyperplane with normal v is the span of
        // the n deflated coordinate vectors e_i - v_i v, so the distance
        // must agree with the orthogonalization route.
        for case in 0..1000u64 {
            let mut rng = trial_rng(99, case);
            let n = 3 + (case % 9) as usize;
            let a: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            let xi: Vec<f64> = (0..n)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();

            let got = hyperplane_distance(&a, &v, &xi).unwrap();

            let span = DenseMatrix::from_fn(n, n, |i, j| {
                let e = if i == j { 1.0 } else { 0.0 };
                Complex64::new(e - v[i] * v[j], 0.0)
            });
            let point: Vec<Complex64> = a
                .iter()
                .zip(&xi)
                .map(|(ai, xii)| Complex64::new(ai + xii, 0.0))
                .collect();
            let want = linalg::distance_to_span(&span, &point).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * (1.0 + want),
                "case {case}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn hyperplane_distance_validates_inputs() {
        assert!(hyperplane_distance(&[0.0], &[1.0], &[1.0, -1.0]).is_err());
        assert!(hyperplane_distance(&[0.0, 0.0], &[1.0, 1.0], &[1.0, -1.0]).is_err());
        assert!(hyperplane_distance(&[0.0, 0.0], &[1.0, 0.0], &[0.5, -1.0]).is_err());
        let ok = hyperplane_distance(&[0.5, -0.25], &[1.0, 0.0], &[1.0, -1.0]).unwrap();
        assert!((ok - 1.5).abs() < 1e-15);
    }

    // ---- distance experiments ----

    #[test]
    fn distance_experiment_shape_and_threshold() {
        let rep = distance_experiment(20, 5, &EntryDistribution::BernoulliSym, 3, 1, false)
            .unwrap();
        assert_eq!(rep.distances.len(), 3);
        assert!(rep.distances.iter().all(|d| d.is_finite() && *d >= 0.0));
        assert_eq!(rep.threshold, 0.01 * 0.25f64.sqrt());
    }

    #[test]
    fn lemma_floor_is_enforced_when_asked() {
        // ceil(4 ln 20) = 12.
        let d = EntryDistribution::BernoulliSym;
        assert!(distance_experiment(20, 5, &d, 1, 0, true).is_err());
        assert!(distance_experiment(20, 12, &d, 1, 0, true).is_ok());
        assert!(distance_experiment(20, 0, &d, 1, 0, false).is_err());
        assert!(distance_experiment(20, 20, &d, 1, 0, false).is_err());
    }

    #[test]
    fn distances_are_deterministic_and_exactly_homogeneous() {
        // Atoms +-1 and +-2 consume the generator identically, so the
        // sampled matrices differ by an exact factor of 2 and every
        // projection step scales along (power-of-two scaling only moves
        // exponents).
        let base = distance_experiment(16, 4, &signed_atoms(1.0), 4, 5, false).unwrap();
        let again = distance_experiment(16, 4, &signed_atoms(1.0), 4, 5, false).unwrap();
        assert_eq!(base, again);
        let doubled = distance_experiment(16, 4, &signed_atoms(2.0), 4, 5, false).unwrap();
        for (d1, d2) in base.distances.iter().zip(&doubled.distances) {
            assert_eq!(2.0 * d1, *d2);
        }
    }

    // ---- sigma tail bound ----

    #[test]
    fn diagonal_truncation_example() {
        // Full spectrum {3, 2, 1}; first-two-rows spectrum {2, 1}. At
        // k = 1 the compared depth is the second largest on both sides.
        let a = DenseMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let out = sigma_tail_bound_check(&a, 1).unwrap();
        assert!((out.lhs - 2.0).abs() < 1e-12);
        assert!((out.rhs - 1.0).abs() < 1e-12);
        assert!((out.reference - 1.0 / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn identity_truncation_is_tight() {
        let out = sigma_tail_bound_check(&DenseMatrix::identity(5), 2).unwrap();
        assert!((out.lhs - 1.0).abs() < 1e-13);
        assert!((out.rhs - 1.0).abs() < 1e-13);
    }

    #[test]
    fn k_range_is_validated() {
        let a = DenseMatrix::identity(4);
        assert!(sigma_tail_bound_check(&a, 0).is_err());
        assert!(sigma_tail_bound_check(&a, 2).is_err());
        assert!(sigma_tail_bound_check(&a, 1).is_ok());
    }

    #[test]
    fn truncation_never_raises_the_matched_singular_value() {
        for case in 0..30u64 {
            let n = 5 + (case % 12) as usize;
            let k = 1 + (case as usize % (n / 2 - 1).max(1)).min(n / 2 - 1);
            let dist = if case % 2 == 0 {
                EntryDistribution::RealGaussian
            } else {
                EntryDistribution::ComplexGaussian
            };
            let a = sample_matrix(&dist, n, 1000 + case, 0).unwrap();
            let out = sigma_tail_bound_check(&a, k).unwrap();
            assert!(
                out.lhs >= out.rhs - 1e-10 * a.frobenius_norm(),
                "case {case}: n = {n}, k = {k}, lhs = {}, rhs = {}",
                out.lhs,
                out.rhs
            );
        }
    }
}
