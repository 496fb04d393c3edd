use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical and combinatorial routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:e})")]
    RootsDidNotConverge {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("not a tract: critical value modulus {max_modulus} is not below 1")]
    NotATract { max_modulus: f64 },

    #[error("tracing failed near {location}: {reason}")]
    Tracing { location: Complex64, reason: String },

    #[error("gradient line stopped at critical point {critical_point}")]
    SaddleConnection { critical_point: Complex64 },

    #[error("winding residual {residual} too large (total turns {turns})")]
    WindingResidual { turns: f64, residual: f64 },

    #[error("containment ambiguous: {0}")]
    Containment(String),

    #[error("vector is not sorted by modulus")]
    NotSorted,

    #[error("configuration is invalid: {0:?}")]
    InvalidConfiguration(Vec<String>),

    #[error("no fiber point found ({starts} starts, best residual {best_residual:e})")]
    EmptyFiber { starts: usize, best_residual: f64 },

    #[error("realization budget exhausted; {found} distinct configurations seen, none matched")]
    RealizationFailed { found: usize, diff: String },

    #[error("continuation stalled at t = {t}")]
    ContinuationStalled { t: f64 },

    #[error("no critical level curve separates the two level sets")]
    NoSeparation,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
