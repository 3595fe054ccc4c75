use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e}, allowed {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("trigonometric polynomial is not real valued (harmonic {harmonic}, mismatch {mismatch:.3e})")]
    RealvaluednessViolated { harmonic: i32, mismatch: f64 },

    #[error("zero polynomial has no resultant")]
    ZeroPolynomial,

    #[error("matrix is singular (|det| = {det_abs:.3e})")]
    SingularMatrix { det_abs: f64 },

    #[error("dimension {0} is too small, d >= 3 is required")]
    DimensionTooSmall(usize),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("matrix does not satisfy the symmetry condition")]
    NotCertified,

    #[error("need at least {min} samples, got {got}")]
    InvalidSampleCount { min: usize, got: usize },

    #[error("P''(w1) = {value:.3e} is not positive at a detected flat part")]
    InconsistentCurvature { value: f64 },

    #[error("origin is not interior to the numerical range (support {support:.3e} at theta {theta:.6})")]
    OriginOutside { theta: f64, support: f64 },

    #[error("invalid family specification: {0}")]
    InvalidSpec(String),

    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
