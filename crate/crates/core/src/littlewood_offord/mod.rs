//! Concentration of random signed sums.
//!
//! For a coefficient vector `v` and independent uniform signs `xi_i`, the
//! sum `S = sum_i xi_i v_i` concentrates on no single value more than
//! `binom(n, n/2) / 2^n` once every `v_i` is nonzero; unit coefficient
//! vectors attain that bound. This module computes the exact law of `S`
//! for integer coefficients, small-ball probabilities for real and complex
//! coefficients, the zero-sum collision counts whose size controls
//! concentration, and the quadratic-form analogue.
//!
//! Everything here is exact combinatorics: probabilities are dyadic
//! rationals with denominator `2^n`, and counts are integers.

mod dyadic;
mod gap;

pub use dyadic::Dyadic;
pub use gap::{gap_sample_vector, pigeonhole_lower_bound, Gap, GAP_VOLUME_CAP};

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::rng::trial_rng;
use crate::Result;

/// Largest number of signs the exact machinery accepts.
pub const MAX_SIGNS: usize = 64;
/// Largest coefficient magnitude accepted by the exact distribution.
pub const MAX_COEFFICIENT: i64 = 1_000_000;
/// Cap on the dynamic-programming table for the exact distribution.
pub const DP_TABLE_CAP: usize = 1 << 24;
/// Largest dimension for exhaustive small-ball enumeration.
pub const MAX_EXACT_SMALL_BALL: usize = 26;
/// Largest dimension for exhaustive quadratic-form enumeration.
pub const MAX_QUADRATIC_SIGNS: usize = 24;
/// Cap on `(2n)^(2k)`, the number of (sign, index) tuples a collision
/// count may enumerate.
pub const COLLISION_BUDGET: u128 = 1_000_000_000;

/// Integer coefficient vector for a signed sum. Zero entries are legal for
/// the distribution itself but weaken concentration bounds, so their
/// presence is recorded at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedVector {
    entries: Vec<i64>,
    has_zero: bool,
}

impl SignedVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "coefficient vector must be nonempty".into(),
            ));
        }
        if entries.len() > MAX_SIGNS {
            return Err(Error::BudgetExceeded {
                what: "signed sum length",
                needed: entries.len() as u128,
                cap: MAX_SIGNS as u128,
            });
        }
        if let Some(&big) = entries.iter().find(|v| v.unsigned_abs() > MAX_COEFFICIENT as u64) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {big} exceeds magnitude cap {MAX_COEFFICIENT}"
            )));
        }
        let has_zero = entries.contains(&0);
        Ok(SignedVector { entries, has_zero })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when some coefficient is zero.
    pub fn has_zero(&self) -> bool {
        self.has_zero
    }
}

/// Exact law of `S = sum_i xi_i v_i`: for each attainable value, the number
/// of sign patterns reaching it. All probabilities share denominator `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSumDistribution {
    counts: BTreeMap<i64, u64>,
    n: u32,
}

impl SignedSumDistribution {
    /// Number of signs.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Attainable values with their pattern counts, ascending by value.
    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    /// Exact probability of hitting `value`.
    pub fn prob(&self, value: i64) -> Dyadic {
        match self.counts.get(&value) {
            Some(&c) => Dyadic::new(c as u128, self.n),
            None => Dyadic::zero(),
        }
    }

    /// Most likely value and its probability; ties resolve to the smallest
    /// value so the result is deterministic.
    pub fn mode(&self) -> (i64, Dyadic) {
        let (value, count) = self
            .counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("distribution is never empty");
        (*value, Dyadic::new(*count as u128, self.n))
    }

    /// `(value, probability)` pairs ascending by value.
    pub fn probabilities(&self) -> impl Iterator<Item = (i64, Dyadic)> + '_ {
        let n = self.n;
        self.counts
            .iter()
            .map(move |(&v, &c)| (v, Dyadic::new(c as u128, n)))
    }

    /// Total pattern count, `2^n`.
    pub fn total(&self) -> u128 {
        1u128 << self.n
    }
}

/// Computes the exact law of the signed sum by dynamic programming over
/// the attainable value range.
///
/// The table spans `[-sum |v_i|, sum |v_i|]`; if that range exceeds
/// [`DP_TABLE_CAP`] entries the error reports the size that would have
/// been needed.
pub fn exact_distribution(v: &SignedVector) -> Result<SignedSumDistribution> {
    let n = v.len();
    let span: i64 = v.entries.iter().map(|x| x.abs()).sum();
    let width = (2 * span + 1) as usize;
    if width > DP_TABLE_CAP {
        return Err(Error::BudgetExceeded {
            what: "signed sum value table",
            needed: width as u128,
            cap: DP_TABLE_CAP as u128,
        });
    }
    // counts[s + span] = number of sign patterns with partial sum s.
    // A single cell never exceeds binom(64, 32) < 2^62, so u64 suffices.
    let mut counts = vec![0u64; width];
    let mut next = vec![0u64; width];
    counts[span as usize] = 1;
    let mut reach: i64 = 0;
    for &x in &v.entries {
        let step = x.abs();
        next.fill(0);
        let lo = (span - reach) as usize;
        let hi = (span + reach) as usize;
        for idx in lo..=hi {
            let c = counts[idx];
            if c == 0 {
                continue;
            }
            next[idx - step as usize] += c;
            next[idx + step as usize] += c;
        }
        std::mem::swap(&mut counts, &mut next);
        reach += step;
    }
    let mut map = BTreeMap::new();
    for (idx, &c) in counts.iter().enumerate() {
        if c > 0 {
            map.insert(idx as i64 - span, c);
        }
    }
    debug_assert_eq!(
        map.values().map(|&c| c as u128).sum::<u128>(),
        1u128 << n
    );
    Ok(SignedSumDistribution {
        counts: map,
        n: n as u32,
    })
}

/// The largest point probability `max_z P(S = z)`, exactly.
pub fn concentration_prob(v: &SignedVector) -> Result<Dyadic> {
    Ok(exact_distribution(v)?.mode().1)
}

/// The sharp bound `binom(n, floor(n/2)) / 2^n` on concentration of a
/// signed sum with `n` nonzero coefficients; unit vectors attain it.
pub fn erdos_bound(n: usize) -> Result<Dyadic> {
    if n == 0 || n > MAX_SIGNS {
        return Err(Error::InvalidParameter(format!(
            "bound defined for 1..={MAX_SIGNS} signs, got {n}"
        )));
    }
    Ok(Dyadic::new(binomial(n as u64, (n / 2) as u64), n as u32))
}

/// `binom(n, k)` computed with exact integer steps.
fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        // Multiply before dividing: the running value is always an exact
        // binomial coefficient, so the division is exact.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// How a small-ball probability should be computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmallBallMode {
    /// Enumerate all `2^n` sums (requires `n <= 26`).
    ExactFiniteSupport,
    /// Estimate from `trials` sampled sign patterns on the given stream.
    MonteCarlo { trials: u64, seed: u64 },
}

/// Result of a small-ball computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallBallEstimate {
    /// Value of (or estimate of) `sup_z P(|S - z| <= beta)`.
    pub estimate: f64,
    /// Binomial standard error, present only for Monte Carlo estimates.
    pub standard_error: Option<f64>,
    /// True when the value is the exact supremum rather than an estimate
    /// or a certified lower bound.
    pub exact: bool,
}

/// Small-ball probability `sup_z P(|sum_i xi_i v_i - z| <= beta)` for real
/// or complex coefficients.
///
/// With real coefficients the exact mode computes the true supremum: the
/// sums are sorted and the best closed window of width `2 beta` always has
/// an atom at its left edge. With genuinely complex coefficients the disk
/// center ranges over the atoms themselves, which yields a certified lower
/// bound (reported with `exact: false`).
pub fn small_ball_prob(
    v: &[Complex64],
    beta: f64,
    mode: SmallBallMode,
) -> Result<SmallBallEstimate> {
    if v.is_empty() {
        return Err(Error::InvalidParameter(
            "coefficient vector must be nonempty".into(),
        ));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius must be finite and nonnegative, got {beta}"
        )));
    }
    let n = v.len();
    let real_input = v.iter().all(|z| z.im == 0.0);
    match mode {
        SmallBallMode::ExactFiniteSupport => {
            if n > MAX_EXACT_SMALL_BALL {
                return Err(Error::BudgetExceeded {
                    what: "small-ball enumeration",
                    needed: n as u128,
                    cap: MAX_EXACT_SMALL_BALL as u128,
                });
            }
            let total = 1usize << n;
            if real_input {
                let mut sums = enumerate_real_sums(v);
                sums.sort_unstable_by(f64::total_cmp);
                let best = max_window_count(&sums, 2.0 * beta);
                Ok(SmallBallEstimate {
                    estimate: best as f64 / total as f64,
                    standard_error: None,
                    exact: true,
                })
            } else {
                let sums = enumerate_complex_sums(v);
                let best = max_disk_count_at_atoms(&sums, beta);
                Ok(SmallBallEstimate {
                    estimate: best as f64 / total as f64,
                    standard_error: None,
                    exact: false,
                })
            }
        }
        SmallBallMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidParameter("trials must be positive".into()));
            }
            let mut rng = trial_rng(seed, 0);
            let mut sums = Vec::with_capacity(trials as usize);
            for _ in 0..trials {
                let mut s = Complex64::new(0.0, 0.0);
                for &coeff in v {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    s += coeff * sign;
                }
                sums.push(s);
            }
            let best = if real_input {
                let mut xs: Vec<f64> = sums.iter().map(|z| z.re).collect();
                xs.sort_unstable_by(f64::total_cmp);
                max_window_count(&xs, 2.0 * beta)
            } else {
                max_disk_count_at_atoms(&sums, beta)
            };
            let estimate = best as f64 / trials as f64;
            let se = (estimate * (1.0 - estimate) / trials as f64).sqrt();
            Ok(SmallBallEstimate {
                estimate,
                standard_error: Some(se),
                exact: false,
            })
        }
    }
}

fn enumerate_real_sums(v: &[Complex64]) -> Vec<f64> {
    let n = v.len();
    let mut sums = vec![0.0f64; 1 << n];
    // Base sum has every sign positive; flipping bit i toggles coefficient i.
    let base: f64 = v.iter().map(|z| z.re).sum();
    sums[0] = base;
    for i in 0..n {
        let (done, rest) = sums.split_at_mut(1 << i);
        for (j, slot) in rest[..1 << i].iter_mut().enumerate() {
            *slot = done[j] - 2.0 * v[i].re;
        }
    }
    sums
}

fn enumerate_complex_sums(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut sums = vec![Complex64::new(0.0, 0.0); 1 << n];
    let base: Complex64 = v.iter().sum();
    sums[0] = base;
    for i in 0..n {
        let (done, rest) = sums.split_at_mut(1 << i);
        for (j, slot) in rest[..1 << i].iter_mut().enumerate() {
            *slot = done[j] - v[i] * 2.0;
        }
    }
    sums
}

/// Largest number of sorted values inside a closed window of given width.
fn max_window_count(sorted: &[f64], width: f64) -> usize {
    let mut best = 0;
    let mut lo = 0;
    for hi in 0..sorted.len() {
        while sorted[hi] - sorted[lo] > width {
            lo += 1;
        }
        best = best.max(hi - lo + 1);
    }
    best
}

/// Largest number of points inside a closed disk of radius `beta` centered
/// at one of the points. Points are swept in real-part order so only a
/// `2 beta` slab is scanned per center.
fn max_disk_count_at_atoms(points: &[Complex64], beta: f64) -> usize {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_unstable_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let r2 = beta * beta;
    let mut best = 0;
    let mut lo = 0;
    for &center in &pts {
        while pts[lo].re < center.re - beta {
            lo += 1;
        }
        let mut count = 0;
        for p in &pts[lo..] {
            if p.re > center.re + beta {
                break;
            }
            if (p - center).norm_sqr() <= r2 {
                count += 1;
            }
        }
        best = best.max(count);
    }
    best
}

/// Number of `(signs, indices)` tuples of order `2k` whose signed
/// coefficient sum vanishes: pairs `(eps, i)` with
/// `eps_1 v_{i_1} + .. + eps_2k v_{i_2k} = 0`, counting ordered index
/// tuples with repetition.
///
/// The enumeration walks all `(2n)^(2k)` branches, so that quantity must
/// stay within [`COLLISION_BUDGET`].
pub fn collision_count(v: &SignedVector, k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("order k must be positive".into()));
    }
    let n = v.len() as u128;
    let branches = (2 * n).checked_pow(2 * k as u32);
    match branches {
        Some(b) if b <= COLLISION_BUDGET => {}
        _ => {
            return Err(Error::BudgetExceeded {
                what: "collision enumeration",
                needed: branches.unwrap_or(u128::MAX),
                cap: COLLISION_BUDGET,
            });
        }
    }
    let mut count = 0u64;
    walk_collisions(v.entries(), 2 * k, 0, &mut count);
    Ok(count)
}

fn walk_collisions(v: &[i64], depth: usize, partial: i64, count: &mut u64) {
    if depth == 0 {
        if partial == 0 {
            *count += 1;
        }
        return;
    }
    for &x in v {
        walk_collisions(v, depth - 1, partial + x, count);
        walk_collisions(v, depth - 1, partial - x, count);
    }
}

/// Ratio of the exact concentration probability to the collision-count
/// predictor `n^(-2k - 1/2) * R_k`. Stable ratios across `n` witness that
/// the predictor captures the concentration scale.
pub fn collision_ratio(v: &SignedVector, k: usize) -> Result<f64> {
    let p = concentration_prob(v)?.to_f64();
    let rk = collision_count(v, k)? as f64;
    let n = v.len() as f64;
    let predictor = n.powf(-(2.0 * k as f64) - 0.5) * rk;
    if predictor == 0.0 {
        return Err(Error::InvalidParameter(
            "collision predictor vanished; ratio undefined".into(),
        ));
    }
    Ok(p / predictor)
}

/// Exact concentration of the quadratic form `Q = sum_{i,j} c_ij xi_i xi_j`:
/// returns the most likely value and its probability, enumerated over all
/// `2^n` sign patterns with Gray-code updates. Ties resolve to the smallest
/// value.
pub fn quadratic_concentration(c: &[Vec<i64>]) -> Result<(i64, Dyadic)> {
    let n = c.len();
    if n == 0 {
        return Err(Error::InvalidParameter("matrix must be nonempty".into()));
    }
    if n > MAX_QUADRATIC_SIGNS {
        return Err(Error::BudgetExceeded {
            what: "quadratic enumeration",
            needed: n as u128,
            cap: MAX_QUADRATIC_SIGNS as u128,
        });
    }
    if c.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "quadratic coefficient matrix must be square".into(),
        });
    }
    if c.iter().flatten().any(|&x| x.unsigned_abs() > MAX_COEFFICIENT as u64) {
        return Err(Error::InvalidParameter(format!(
            "quadratic coefficient exceeds magnitude cap {MAX_COEFFICIENT}"
        )));
    }
    // Symmetrized couplings: flipping sign k changes Q by -2 xi_k t_k where
    // t_k = sum_{j != k} (c_kj + c_jk) xi_j.
    let mut sym = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sym[i][j] = c[i][j] + c[j][i];
            }
        }
    }
    let mut signs = vec![1i64; n];
    let mut t: Vec<i64> = (0..n)
        .map(|k| (0..n).filter(|&j| j != k).map(|j| sym[k][j]).sum())
        .collect();
    let mut q: i64 = c.iter().flatten().sum();
    let mut tally: BTreeMap<i64, u64> = BTreeMap::new();
    *tally.entry(q).or_insert(0) += 1;
    let total = 1u64 << n;
    for step in 1..total {
        // Gray code flips the lowest set bit position of the step index.
        let k = step.trailing_zeros() as usize;
        q -= 2 * signs[k] * t[k];
        let delta = -2 * signs[k];
        for m in 0..n {
            if m != k {
                t[m] += delta * sym[m][k];
            }
        }
        signs[k] = -signs[k];
        *tally.entry(q).or_insert(0) += 1;
    }
    let (value, count) = tally
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .expect("tally is nonempty");
    Ok((*value, Dyadic::new(*count as u128, n as u32)))
}
