//! Error type shared by every module of the crate.

use thiserror::Error;

/// All failure modes of the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix or vector was constructed from NaN or infinite entries.
    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    /// Linear solve or inversion on a matrix whose determinant is below the
    /// singularity threshold.
    #[error("singular matrix: |det| = {det:.3e} <= threshold {threshold:.3e}")]
    SingularMatrix { det: f64, threshold: f64 },

    /// Evaluation outside the parameter interval of a curve or spec.
    #[error("parameter {t} outside domain [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    /// A sampled curve does not carry enough points for its stencil.
    #[error("insufficient samples: have {have}, stencil needs {need}")]
    InsufficientSamples { have: usize, need: usize },

    /// Catalog lookup with an unrecognized curve name.
    #[error("unknown catalog curve: {0:?}")]
    UnknownCatalogName(String),

    /// Invalid parameters for a curve description.
    #[error("bad curve parameters: {0}")]
    BadParams(String),

    /// Finite-difference accuracy order not in the supported set.
    #[error("unsupported finite-difference order {0} (supported: 2, 4, 6)")]
    UnsupportedOrder(usize),

    /// The derivative-Gram determinant dropped below the degeneracy threshold.
    #[error("degenerate curve at t = {t}: det = {det:.6e}")]
    DegenerateCurve { t: f64, det: f64 },

    /// Negative derivative-Gram determinant; the orientation convention
    /// requires it positive.
    #[error("orientation violation at t = {t}: det = {det:.6e} < 0")]
    OrientationViolation { t: f64, det: f64 },

    /// Arc length failed to increase strictly along the grid.
    #[error("arc length not strictly increasing at grid index {index}")]
    NonMonotone { index: usize },

    /// An arc-length table does not cover the curve domain it was paired with.
    #[error("arc-length table mismatch: {0}")]
    TableMismatch(String),

    /// Curvature extraction on a jet that is not in natural parametrization.
    #[error("jet not in natural parametrization: {reason} (value {value:.3e}, tolerance {tol:.1e})")]
    NotNaturalParameter {
        reason: &'static str,
        value: f64,
        tol: f64,
    },

    /// A linear map that is not unimodular where det = 1 is required.
    #[error("matrix not unimodular: det = {det}")]
    NotUnimodular { det: f64 },

    /// Two objects of different ambient dimension were combined.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two profiles with different grid sizes were compared.
    #[error("grid mismatch: {left} vs {right} points")]
    GridMismatch { left: usize, right: usize },

    /// Frame-ODE integration lost unimodularity beyond the drift budget.
    #[error("determinant drift exceeded at s = {s}: |det F - 1| = {drift:.3e}")]
    DriftExceeded { s: f64, drift: f64 },

    /// Malformed input file or inline spec.
    #[error("parse error: {0}")]
    Parse(String),

    /// File system failure while reading or writing CLI inputs/outputs.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Process exit code for the CLI: 0/1 are reserved for the equivalence
    /// decision, everything else maps failures onto stable codes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Io { .. }
            | Error::UnknownCatalogName(_)
            | Error::BadParams(_)
            | Error::UnsupportedOrder(_) => 2,
            Error::DegenerateCurve { .. } | Error::OrientationViolation { .. } => 3,
            Error::DimensionMismatch { .. } | Error::GridMismatch { .. } => 4,
            Error::NotUnimodular { .. } => 5,
            Error::DriftExceeded { .. } => 6,
            _ => 7,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
