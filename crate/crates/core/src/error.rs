use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial evaluation overflowed at z = {0}")]
    Overflow(Complex64),

    #[error("evaluation at pole {pole}")]
    Pole { pole: Complex64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("inadmissible function: {0}")]
    Inadmissible(String),

    #[error("numerator and denominator share a common factor (normalized resultant factor {0:.3e})")]
    CommonFactor(f64),

    #[error("degenerate function: {0}")]
    Degenerate(String),

    #[error("newton iteration diverged from {start}")]
    Divergence { start: Complex64 },

    #[error("curve tracing failed at theta = {theta}: {reason}")]
    Tracing { theta: f64, reason: String },

    #[error("square-root branch jump of {jump:.3} rad between samples {index} and {next}; refine the curve")]
    BranchJump { index: usize, next: usize, jump: f64 },

    #[error("function vanishes (|g| = {modulus:.3e}) on the winding contour near {at}")]
    OnZero { at: Complex64, modulus: f64 },

    #[error("winding refinement budget of {0} samples exhausted")]
    RefinementBudget(usize),

    #[error("cannot isolate {0} with a circle above the minimum radius")]
    Isolation(Complex64),

    #[error("path endpoint {0} lies on a caustic")]
    EndpointOnCaustic(Complex64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
