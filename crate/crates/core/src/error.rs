use thiserror::Error;

/// Errors raised by the lattice calculus and the spectral harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site:?} shifted along axis {axis} leaves the storage range")]
    ShiftOutOfRange { site: [i64; 4], axis: usize },

    #[error("complex-copy mismatch: expected {expected} operand, got {got}")]
    CopyMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("operation requires {required} boundary mode")]
    UnsupportedBoundaryMode { required: &'static str },

    #[error("lattice too large for dense work: dimension {dim} exceeds {max}")]
    LatticeTooLarge { dim: usize, max: usize },

    #[error("mass list must be non-empty")]
    EmptyMassList,

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("dense eigendecomposition did not converge")]
    EigenFailure,
}
