use alloc::string::String;

/// Errors raised by the simulation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not a density matrix: {reason}")]
    NotDensity { reason: String },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("eigensolver failed to converge")]
    NoConvergence,
    #[error("invalid spectrum: eigenvalue {re} + {im}i of a positive product")]
    InvalidSpectrum { re: f64, im: f64 },
    #[error("control qubit carries no coherence; the trace cannot be recovered")]
    NoInformation,
    #[error("relative error is undefined for a zero true value")]
    UndefinedRelativeError,
    #[error("both quadratures of the trace vanish; no axis can meet a relative error budget")]
    EmptyBudget,
    #[error("inconsistent budget: radicand {radicand} is negative")]
    InconsistentBudget { radicand: f64 },
    #[error("ensemble does not realize the target state (deviation {deviation:e})")]
    EnsembleMismatch { deviation: f64 },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = core::result::Result<T, Error>;
