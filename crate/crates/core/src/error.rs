use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode count {0} is below the minimum of 2")]
    TooFewModes(usize),

    #[error("dense evaluation is limited to {max} modes, got {got}")]
    DenseTooLarge { got: usize, max: usize },

    #[error("efficiency {value} for mode {mode} is outside [0, 1]")]
    EfficiencyOutOfRange { mode: usize, value: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {left}x{left} against {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("probability {0} lies outside [0, 1] beyond rounding tolerance")]
    ProbabilityOutOfRange(f64),

    #[error("photon cutoff must be at least 1, got {0}")]
    CutoffTooSmall(usize),

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} subintervals")]
    QuadratureNotConverged { error: f64, intervals: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid mode range {min}..={max}")]
    InvalidRange { min: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
