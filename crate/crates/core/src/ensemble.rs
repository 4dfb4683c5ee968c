//! Random-matrix ensembles: entry distributions, deterministic shifts, and
//! the experiment configuration that ties them together.
//!
//! A sampled matrix `X` has i.i.d. entries drawn in row-major order from a
//! [`trial stream`](crate::rng::trial_rng). A shift either adds a fixed
//! matrix (`M + X`) or conjugates the noise through a diagonal frame
//! (`A + B X B`). Both the raw combination and the normalized variant used
//! for spectral plots (noise scaled by `1/sqrt(n)`, shift kept at unit
//! scale) are provided.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::rng::trial_rng;
use crate::Result;

/// One value of a custom discrete entry law, with its probability kept as
/// an exact rational `numerator / denominator`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteAtom {
    pub value: Complex64,
    pub numerator: u64,
    pub denominator: u64,
}

impl DiscreteAtom {
    pub fn new(re: f64, im: f64, numerator: u64, denominator: u64) -> Self {
        DiscreteAtom {
            value: Complex64::new(re, im),
            numerator,
            denominator,
        }
    }

    fn prob(&self) -> BigRational {
        BigRational::new(self.numerator.into(), self.denominator.into())
    }
}

/// Law of a single matrix entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EntryDistribution {
    /// Symmetric Bernoulli: +1 or -1 with probability 1/2 each.
    BernoulliSym,
    /// Standard real Gaussian, mean 0, variance 1.
    RealGaussian,
    /// Complex Gaussian with unit total variance: real and imaginary parts
    /// are independent Gaussians of variance 1/2 each.
    ComplexGaussian,
    /// Finitely supported law with exact rational probabilities.
    DiscreteCustom { atoms: Vec<DiscreteAtom> },
}

impl EntryDistribution {
    /// Checks that the distribution is well formed. For `DiscreteCustom`
    /// this means strictly positive probabilities summing to exactly one,
    /// verified in rational arithmetic.
    pub fn validate(&self) -> Result<()> {
        if let EntryDistribution::DiscreteCustom { atoms } = self {
            if atoms.is_empty() {
                return Err(Error::InvalidDistribution("no atoms".to_string()));
            }
            let mut total = BigRational::from_integer(0.into());
            for atom in atoms {
                if atom.denominator == 0 {
                    return Err(Error::InvalidDistribution(
                        "zero denominator".to_string(),
                    ));
                }
                if atom.numerator == 0 {
                    return Err(Error::InvalidDistribution(
                        "atom probability must be positive".to_string(),
                    ));
                }
                if !atom.value.re.is_finite() || !atom.value.im.is_finite() {
                    return Err(Error::InvalidDistribution(
                        "atom value must be finite".to_string(),
                    ));
                }
                total += atom.prob();
            }
            if total != BigRational::from_integer(1.into()) {
                return Err(Error::InvalidDistribution(format!(
                    "probabilities sum to {total}, expected 1"
                )));
            }
        }
        Ok(())
    }

    /// Mean of one entry.
    pub fn mean(&self) -> Complex64 {
        match self {
            EntryDistribution::BernoulliSym
            | EntryDistribution::RealGaussian
            | EntryDistribution::ComplexGaussian => Complex64::new(0.0, 0.0),
            EntryDistribution::DiscreteCustom { atoms } => atoms
                .iter()
                .map(|a| a.value * (a.numerator as f64 / a.denominator as f64))
                .sum(),
        }
    }

    /// Variance of one entry, `E |Z - E Z|^2`.
    pub fn variance(&self) -> f64 {
        match self {
            EntryDistribution::BernoulliSym
            | EntryDistribution::RealGaussian
            | EntryDistribution::ComplexGaussian => 1.0,
            EntryDistribution::DiscreteCustom { atoms } => {
                let m = self.mean();
                atoms
                    .iter()
                    .map(|a| (a.value - m).norm_sqr() * (a.numerator as f64 / a.denominator as f64))
                    .sum()
            }
        }
    }

    /// Draws one entry. For `DiscreteCustom`, selection is exact: a uniform
    /// integer below the common denominator is compared against cumulative
    /// rational weights, so no atom probability is rounded.
    fn sample_entry(&self, rng: &mut ChaCha8Rng, table: Option<&DiscreteTable>) -> Complex64 {
        match self {
            EntryDistribution::BernoulliSym => {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                Complex64::new(sign, 0.0)
            }
            EntryDistribution::RealGaussian => {
                let x: f64 = rng.sample(StandardNormal);
                Complex64::new(x, 0.0)
            }
            EntryDistribution::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
            EntryDistribution::DiscreteCustom { .. } => {
                let table = table.expect("discrete table prepared before sampling");
                let u: u128 = rng.gen_range(0..table.denominator);
                let idx = table
                    .cumulative
                    .iter()
                    .position(|&c| u < c)
                    .expect("cumulative weights cover the denominator");
                table.values[idx]
            }
        }
    }

    fn discrete_table(&self) -> Result<Option<DiscreteTable>> {
        let EntryDistribution::DiscreteCustom { atoms } = self else {
            return Ok(None);
        };
        let mut denominator: u128 = 1;
        for atom in atoms {
            let d = atom.denominator as u128;
            let g = gcd_u128(denominator, d);
            denominator = (denominator / g).checked_mul(d).ok_or_else(|| {
                Error::InvalidDistribution("common denominator exceeds u128".to_string())
            })?;
        }
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc: u128 = 0;
        for atom in atoms {
            let weight = (atom.numerator as u128) * (denominator / atom.denominator as u128);
            acc += weight;
            cumulative.push(acc);
        }
        debug_assert_eq!(acc, denominator);
        Ok(Some(DiscreteTable {
            denominator,
            cumulative,
            values: atoms.iter().map(|a| a.value).collect(),
        }))
    }
}

/// Exact sampling table for a validated `DiscreteCustom` law.
struct DiscreteTable {
    denominator: u128,
    cumulative: Vec<u128>,
    values: Vec<Complex64>,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Shape of the deterministic part of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ShiftKind {
    /// No shift: the ensemble is the noise matrix itself.
    Zero,
    /// Adds the identity.
    Identity,
    /// Adds a diagonal matrix whose first n/2 entries are the first value
    /// and whose last n/2 entries are the second. Requires even n.
    TwoBlockDiag(f64, f64),
    /// `A + B X B` with `A = diag(d1 .. d1, d2 .. d2)` and
    /// `B = diag(b1 .. b1, b2 .. b2)`, split at n/2. Requires even n.
    /// Field order: (d1, d2, b1, b2).
    Sandwich(f64, f64, f64, f64),
}

impl ShiftKind {
    fn name(&self) -> &'static str {
        match self {
            ShiftKind::Zero => "Zero",
            ShiftKind::Identity => "Identity",
            ShiftKind::TwoBlockDiag(..) => "TwoBlockDiag",
            ShiftKind::Sandwich(..) => "Sandwich",
        }
    }

    fn needs_even(&self) -> bool {
        matches!(self, ShiftKind::TwoBlockDiag(..) | ShiftKind::Sandwich(..))
    }
}

/// A shift kind bound to a concrete dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSpec {
    pub kind: ShiftKind,
    pub n: usize,
}

impl ShiftSpec {
    pub fn new(kind: ShiftKind, n: usize) -> Self {
        ShiftSpec { kind, n }
    }
}

/// Deterministic matrices produced from a [`ShiftSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltShift {
    /// Ensemble is `M + X`.
    Additive(DenseMatrix),
    /// Ensemble is `offset + frame * X * frame`.
    Sandwich {
        offset: DenseMatrix,
        frame: DenseMatrix,
    },
}

/// Materializes the deterministic matrices of a shift.
pub fn build_shift(spec: &ShiftSpec) -> Result<BuiltShift> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter("shift dimension must be positive".into()));
    }
    if spec.kind.needs_even() && !n.is_multiple_of(2) {
        return Err(Error::OddBlockDimension {
            kind: spec.kind.name(),
            n,
        });
    }
    let half_diag = |lo: f64, hi: f64| {
        let d: Vec<f64> = (0..n).map(|i| if i < n / 2 { lo } else { hi }).collect();
        DenseMatrix::from_real_diagonal(&d)
    };
    Ok(match spec.kind {
        ShiftKind::Zero => BuiltShift::Additive(DenseMatrix::zeros(n, n)),
        ShiftKind::Identity => BuiltShift::Additive(DenseMatrix::identity(n)),
        ShiftKind::TwoBlockDiag(v1, v2) => BuiltShift::Additive(half_diag(v1, v2)),
        ShiftKind::Sandwich(d1, d2, b1, b2) => BuiltShift::Sandwich {
            offset: half_diag(d1, d2),
            frame: half_diag(b1, b2),
        },
    })
}

/// Full description of a randomized experiment. Serializes to flat JSON
/// with exactly these field names, so an echoed configuration can be fed
/// back to reproduce a run byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub distribution: EntryDistribution,
    pub shift: ShiftKind,
    /// Experiment-specific knobs (grid sizes, radii, thresholds). Kept as a
    /// sorted map so echoed configs are deterministic.
    #[serde(default)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

fn default_trials() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(seed: u64, n: usize, trials: usize, distribution: EntryDistribution, shift: ShiftKind) -> Self {
        ExperimentConfig {
            seed,
            n,
            trials,
            distribution,
            shift,
            extra: BTreeMap::new(),
        }
    }

    pub fn shift_spec(&self) -> ShiftSpec {
        ShiftSpec::new(self.shift.clone(), self.n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        self.distribution.validate()?;
        build_shift(&self.shift_spec())?;
        Ok(())
    }
}

/// Samples an `n x n` matrix with i.i.d. entries, filled in row-major
/// order from the (seed, trial) stream.
pub fn sample_matrix(
    distribution: &EntryDistribution,
    n: usize,
    seed: u64,
    trial: u64,
) -> Result<DenseMatrix> {
    distribution.validate()?;
    let table = distribution.discrete_table()?;
    let mut rng = trial_rng(seed, trial);
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, distribution.sample_entry(&mut rng, table.as_ref()));
        }
    }
    Ok(m)
}

/// Draws the noise matrix for one trial and applies the shift at raw scale:
/// `M + X`, `A + B X B`, or plain `X` for the zero shift.
pub fn assemble_ensemble(config: &ExperimentConfig, trial: u64) -> Result<DenseMatrix> {
    config.validate()?;
    let x = sample_matrix(&config.distribution, config.n, config.seed, trial)?;
    combine(&config.shift_spec(), &x)
}

/// Same as [`assemble_ensemble`] but with the noise scaled by `1/sqrt(n)`
/// while the shift stays at unit scale. This is the normalization under
/// which shifted spectra settle onto unit-radius disks around the shift's
/// diagonal values.
pub fn assemble_normalized(config: &ExperimentConfig, trial: u64) -> Result<DenseMatrix> {
    config.validate()?;
    let x = sample_matrix(&config.distribution, config.n, config.seed, trial)?;
    let scaled = x.scale(Complex64::new(1.0 / (config.n as f64).sqrt(), 0.0));
    combine(&config.shift_spec(), &scaled)
}

fn combine(spec: &ShiftSpec, x: &DenseMatrix) -> Result<DenseMatrix> {
    match build_shift(spec)? {
        BuiltShift::Additive(m) => m.add(x),
        BuiltShift::Sandwich { offset, frame } => {
            offset.add(&frame.matmul(x)?.matmul(&frame)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli_config(n: usize, shift: ShiftKind) -> ExperimentConfig {
        ExperimentConfig::new(42, n, 1, EntryDistribution::BernoulliSym, shift)
    }

    #[test]
    fn bernoulli_entries_are_signs() {
        let m = sample_matrix(&EntryDistribution::BernoulliSym, 16, 1, 0).unwrap();
        for z in m.data() {
            assert!(z.im == 0.0 && (z.re == 1.0 || z.re == -1.0));
        }
    }

    #[test]
    fn bernoulli_is_roughly_balanced() {
        let m = sample_matrix(&EntryDistribution::BernoulliSym, 100, 7, 0).unwrap();
        let mean: f64 = m.data().iter().map(|z| z.re).sum::<f64>() / 1e4;
        assert!(mean.abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn complex_gaussian_has_unit_total_variance() {
        let m = sample_matrix(&EntryDistribution::ComplexGaussian, 120, 3, 0).unwrap();
        let count = m.data().len() as f64;
        let second: f64 = m.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / count;
        assert!((second - 1.0).abs() < 0.03, "E|z|^2 = {second}");
        // Real and imaginary parts each carry half the variance.
        let re_var: f64 = m.data().iter().map(|z| z.re * z.re).sum::<f64>() / count;
        assert!((re_var - 0.5).abs() < 0.03, "re var {re_var}");
    }

    #[test]
    fn discrete_custom_must_sum_to_one_exactly() {
        let thirds = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(1.0, 0.0, 1, 3),
                DiscreteAtom::new(-1.0, 0.0, 1, 3),
            ],
        };
        assert!(thirds.validate().is_err());

        let ok = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(1.0, 0.0, 1, 3),
                DiscreteAtom::new(0.0, 0.0, 1, 3),
                DiscreteAtom::new(-1.0, 0.0, 1, 3),
            ],
        };
        ok.validate().unwrap();

        // 1/2 + 1/3 + 1/6 = 1 across mixed denominators.
        let mixed = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(1.0, 0.0, 1, 2),
                DiscreteAtom::new(0.0, 1.0, 1, 3),
                DiscreteAtom::new(-2.0, 0.0, 1, 6),
            ],
        };
        mixed.validate().unwrap();
    }

    #[test]
    fn discrete_custom_rejects_zero_probability_and_zero_denominator() {
        let zero_num = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(1.0, 0.0, 0, 2),
                DiscreteAtom::new(-1.0, 0.0, 2, 2),
            ],
        };
        assert!(zero_num.validate().is_err());
        let zero_den = EntryDistribution::DiscreteCustom {
            atoms: vec![DiscreteAtom::new(1.0, 0.0, 1, 0)],
        };
        assert!(zero_den.validate().is_err());
    }

    #[test]
    fn discrete_bernoulli_matches_builtin_support() {
        let dist = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(1.0, 0.0, 1, 2),
                DiscreteAtom::new(-1.0, 0.0, 1, 2),
            ],
        };
        let m = sample_matrix(&dist, 20, 5, 0).unwrap();
        for z in m.data() {
            assert!(z.im == 0.0 && z.re.abs() == 1.0);
        }
        assert_eq!(dist.mean(), Complex64::new(0.0, 0.0));
        assert_eq!(dist.variance(), 1.0);
    }

    #[test]
    fn discrete_frequencies_track_exact_probabilities() {
        // P(2) = 3/4, P(-6) = 1/4: mean = 0, variance = 12.
        let dist = EntryDistribution::DiscreteCustom {
            atoms: vec![
                DiscreteAtom::new(2.0, 0.0, 3, 4),
                DiscreteAtom::new(-6.0, 0.0, 1, 4),
            ],
        };
        assert_eq!(dist.mean(), Complex64::new(0.0, 0.0));
        assert_eq!(dist.variance(), 12.0);
        let m = sample_matrix(&dist, 100, 11, 0).unwrap();
        let high = m.data().iter().filter(|z| z.re == 2.0).count() as f64 / 1e4;
        assert!((high - 0.75).abs() < 0.02, "freq {high}");
    }

    #[test]
    fn shift_identity_adds_one_on_diagonal() {
        let cfg = bernoulli_config(8, ShiftKind::Identity);
        let a = assemble_ensemble(&cfg, 0).unwrap();
        let x = sample_matrix(&cfg.distribution, 8, cfg.seed, 0).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expect = if i == j {
                    x.get(i, j) + Complex64::new(1.0, 0.0)
                } else {
                    x.get(i, j)
                };
                assert_eq!(a.get(i, j), expect);
            }
        }
        // Diagonal of Bernoulli + identity lives in {0, 2}.
        for i in 0..8 {
            let d = a.get(i, i).re;
            assert!(d == 0.0 || d == 2.0);
        }
    }

    #[test]
    fn two_block_diagonal_layout() {
        let spec = ShiftSpec::new(ShiftKind::TwoBlockDiag(1.0, 2.5), 4);
        let BuiltShift::Additive(m) = build_shift(&spec).unwrap() else {
            panic!("additive expected")
        };
        let diag: Vec<f64> = (0..4).map(|i| m.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, 2.5, 2.5]);
    }

    #[test]
    fn block_shifts_reject_odd_dimension() {
        assert!(build_shift(&ShiftSpec::new(ShiftKind::TwoBlockDiag(1.0, 2.0), 5)).is_err());
        assert!(build_shift(&ShiftSpec::new(ShiftKind::Sandwich(1.0, 5.0, 1.0, 2.0), 7)).is_err());
        assert!(build_shift(&ShiftSpec::new(ShiftKind::Identity, 5)).is_ok());
    }

    #[test]
    fn sandwich_conjugates_entrywise() {
        let cfg = bernoulli_config(6, ShiftKind::Sandwich(1.0, 5.0, 1.0, 2.0));
        let a = assemble_ensemble(&cfg, 0).unwrap();
        let x = sample_matrix(&cfg.distribution, 6, cfg.seed, 0).unwrap();
        let b = |i: usize| if i < 3 { 1.0 } else { 2.0 };
        let d = |i: usize| if i < 3 { 1.0 } else { 5.0 };
        for i in 0..6 {
            for j in 0..6 {
                let mut expect = b(i) * b(j) * x.get(i, j);
                if i == j {
                    expect += Complex64::new(d(i), 0.0);
                }
                assert!((a.get(i, j) - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_shift_returns_noise_verbatim() {
        let cfg = bernoulli_config(5, ShiftKind::Zero);
        let a = assemble_ensemble(&cfg, 0).unwrap();
        let x = sample_matrix(&cfg.distribution, 5, cfg.seed, 0).unwrap();
        assert_eq!(a, x);
    }

    #[test]
    fn normalized_assembly_scales_noise_only() {
        let cfg = bernoulli_config(16, ShiftKind::Identity);
        let a = assemble_normalized(&cfg, 0).unwrap();
        let x = sample_matrix(&cfg.distribution, 16, cfg.seed, 0).unwrap();
        let s = 1.0 / 4.0;
        for i in 0..16 {
            for j in 0..16 {
                let expect = x.get(i, j) * s
                    + if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                assert!((a.get(i, j) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_per_trial() {
        let d = EntryDistribution::RealGaussian;
        let a = sample_matrix(&d, 10, 9, 4).unwrap();
        let b = sample_matrix(&d, 10, 9, 4).unwrap();
        let c = sample_matrix(&d, 10, 9, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn config_json_round_trip_uses_exact_field_names() {
        let mut cfg = bernoulli_config(100, ShiftKind::TwoBlockDiag(1.0, 2.5));
        cfg.extra
            .insert("grid".to_string(), serde_json::json!(64));
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        for key in ["\"seed\"", "\"n\"", "\"trials\"", "\"distribution\"", "\"shift\"", "\"extra\""] {
            assert!(text.contains(key), "missing {key} in {text}");
        }
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn config_parses_from_literal_json() {
        let text = r#"{
            "seed": 7,
            "n": 50,
            "trials": 3,
            "distribution": {"DiscreteCustom": {"atoms": [
                {"value": [1.0, 0.0], "numerator": 1, "denominator": 2},
                {"value": [-1.0, 0.0], "numerator": 1, "denominator": 2}
            ]}},
            "shift": "Zero"
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.trials, 3);
        assert!(cfg.extra.is_empty());
        cfg.validate().unwrap();
    }
}
