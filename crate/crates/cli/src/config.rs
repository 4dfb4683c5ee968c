//! Per-subcommand JSON configs. Every struct rejects unknown keys so a
//! typo fails loudly with the offending key named, and every optional
//! field has an explicit default that the echoed config materializes.

use serde::{Deserialize, Serialize};
use spectralab_core::ensemble::{EntryDistribution, ShiftKind};
use spectralab_core::spectral::ReferenceLaw;

fn default_tol() -> f64 {
    1e-9
}

fn default_grid() -> usize {
    spectralab_core::spectral::DEFAULT_DISTANCE_GRID
}

fn default_shift() -> ShiftKind {
    ShiftKind::Zero
}

fn default_radii() -> Vec<f64> {
    vec![0.5, 0.8, 1.0, 1.05]
}

fn default_gap_trials() -> u64 {
    100
}

fn default_slack() -> f64 {
    0.01
}

fn default_condition_trials() -> u64 {
    400
}

fn default_distance_trials() -> u64 {
    200
}

fn default_true() -> bool {
    true
}

/// One ensemble draw: shift + noise/sqrt(n), eigenvalues, disk masses.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EsdConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    pub distribution: EntryDistribution,
    #[serde(default = "default_shift")]
    pub shift: ShiftKind,
    /// Eigensolver residual tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Radii at which result.csv reports disk masses.
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    /// Reference law to compare against (adds a distance row).
    #[serde(default)]
    pub law: Option<ReferenceLaw>,
    /// Lattice resolution for the law distance.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Mirror the upper triangle before normalizing (Wigner-style draw).
    #[serde(default)]
    pub hermitize: bool,
    /// Also emit scatter.svg.
    #[serde(default)]
    pub scatter: bool,
}

/// Bernoulli-vs-Gaussian spectra under one shared shift.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalityConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    pub shift: ShiftKind,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub scatter: bool,
}

/// Exact signed-sum distribution of one integer coefficient vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoConfig {
    pub vector: Vec<i64>,
    /// Collision-ratio orders to report in summary.csv.
    #[serde(default)]
    pub halasz_orders: Vec<usize>,
}

/// Concentration of progression-sampled coefficient vectors against the
/// pigeonhole bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapConfig {
    #[serde(default)]
    pub seed: u64,
    pub a0: i64,
    pub generators: Vec<i64>,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
    /// Coefficient vector length per draw.
    pub n: usize,
    #[serde(default = "default_gap_trials")]
    pub trials: u64,
    /// Slack constant multiplying the pigeonhole bound.
    #[serde(default = "default_slack")]
    pub slack: f64,
}

/// Base matrix for the condition-tail experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum BaseMatrix {
    Zero,
    ScaledIdentity { factor: f64 },
}

/// Condition-number tail of `A + M` under iid perturbations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    pub base: BaseMatrix,
    pub distribution: EntryDistribution,
    pub x_grid: Vec<f64>,
    #[serde(default = "default_condition_trials")]
    pub trials: u64,
}

/// Row-to-span distances at codimension about k.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub distribution: EntryDistribution,
    #[serde(default = "default_distance_trials")]
    pub trials: u64,
    /// Require k >= ceil(4 ln n) as in the distance lemma hypothesis.
    #[serde(default = "default_true")]
    pub enforce_floor: bool,
}
