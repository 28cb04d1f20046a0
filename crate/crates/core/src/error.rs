use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DunklError {
    #[error("order parameter alpha = {0} must satisfy alpha > -1/2")]
    InvalidOrder(f64),
    #[error("Sonine pair requires beta > alpha (got alpha = {alpha}, beta = {beta})")]
    InvalidPair { alpha: f64, beta: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("half-integer alpha = {0} is unsupported by the Riemann-Liouville inversion formulas")]
    HalfIntegerOrder(f64),
    #[error("non-integrable weight exponent {0} (must exceed -1)")]
    NonIntegrableWeight(f64),
    #[error("series did not converge within {terms} terms at |z| = {modulus}; use the Bochner mode")]
    SeriesNotConverged { terms: usize, modulus: f64 },
    #[error("argument |z| = {modulus} exceeds the limit {limit} of the {mode} evaluation")]
    ArgumentTooLarge { modulus: f64, limit: f64, mode: &'static str },
    #[error("semi-infinite tail did not converge after {0} panels")]
    TailNotConverged(usize),
    #[error("function has no derivative evaluator, needed at x = {0}")]
    MissingDerivative(f64),
    #[error("Taylor coefficients at the origin are required for this pairing")]
    MissingTaylor,
    #[error("pairing exponent {lambda} needs Taylor order > {needed}")]
    TaylorOrderTooLow { lambda: f64, needed: i64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid too coarse: {0}")]
    CoarseGrid(String),
    #[error("transform plan self-test failed: error {achieved:.3e} exceeds {tol:.3e}; enlarge L or n_x")]
    PlanSelfTest { achieved: f64, tol: f64 },
    #[error("fractional exponent {lambda} outside the absolutely convergent range ({low}, 0)")]
    ExponentOutOfRange { lambda: f64, low: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;
