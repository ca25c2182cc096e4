//! Tolerance ladder shared by the checks in this crate.

/// Construction checks: unitarity of generated matrices, normalization, trace.
pub const CONSTRUCTION: f64 = 1e-12;

/// Spectral reconstruction and validation of user supplied matrices.
pub const SPECTRAL: f64 = 1e-10;

/// Inequalities between closed forms and numerically searched values.
pub const THEOREM: f64 = 1e-9;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY: f64 = 1e-8;

/// Largest matrix dimension `kron` will build by default (2^12).
pub const MAX_DIM: usize = 1 << 12;

/// Largest supported system register (joint dimension 2^11).
pub const MAX_QUBITS: usize = 10;
