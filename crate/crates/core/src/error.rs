use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that requires a square matrix received a rectangular one.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Matrix or vector dimensions do not line up.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A custom discrete distribution failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A block-structured shift needs an even dimension.
    #[error("shift {kind} requires even n, got {n}")]
    OddBlockDimension { kind: &'static str, n: usize },

    /// Problem size exceeds a documented cap or memory budget.
    #[error("{what} needs {needed} but the cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    /// An iterative solver ran out of its iteration budget.
    #[error("{what} failed to converge within {budget} iterations")]
    NoConvergence { what: &'static str, budget: usize },

    /// An evaluation point sits too close to the spectrum for the result
    /// to mean anything.
    #[error("pseudospectrum proximity: {context} (separation {separation:.3e} below guard {guard:.3e})")]
    PseudospectrumProximity {
        context: &'static str,
        separation: f64,
        guard: f64,
    },

    /// Input/output failure while reading or writing experiment artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed configuration or serialization payload.
    #[error("config error: {0}")]
    Config(#[from] serde_json::Error),
}
