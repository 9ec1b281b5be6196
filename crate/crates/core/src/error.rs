//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The request is well-formed but outside the supported domain
    /// (for example a closed-form basis for a space that has none).
    #[error("unsupported domain: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or produced a non-finite
    /// value that cannot be repaired.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Cholesky factorization hit a non-positive pivot; the index names the
    /// offending basis element.
    #[error("Gram matrix not numerically positive definite at pivot {pivot} (value {value:e})")]
    Decomposition { pivot: usize, value: f64 },

    /// An API contract between modules was violated (mismatched dimensions,
    /// missing required descriptor fields, inconsistent accumulation weights).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The polynomial has effective degree zero after trimming, so there is
    /// nothing to solve for.
    #[error("no roots: effective degree is zero after trimming")]
    NoRoots,

    /// A statistic was requested from fewer trials than its minimum.
    #[error("insufficient sample: need at least {need} trials, got {got}")]
    InsufficientSample { need: usize, got: usize },

    /// The reference measure is not absolutely continuous, so it has no
    /// pointwise density to evaluate.
    #[error("reference measure has no pointwise density")]
    NoPointwiseDensity,

    /// Two gridded objects that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
