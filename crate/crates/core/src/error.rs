use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported operator dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid correlation spec: {0}")]
    InvalidSpec(String),

    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("time-dependent evolution requires t1 >= t0 (got t0={t0}, t1={t1})")]
    BackwardTimeDependent { t0: f64, t1: f64 },

    #[error("envelope evaluated outside its domain at t={0}")]
    EnvelopeDomain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge within {points} points (last change {change:e})")]
    NoConvergence { points: usize, change: f64 },

    #[error("result expected real but imaginary residue is {0:e}")]
    ImaginaryResidue(f64),

    #[error("malformed pulse event: {0}")]
    MalformedEvent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
