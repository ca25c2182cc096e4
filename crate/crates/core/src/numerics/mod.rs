//! Dense complex linear algebra, spectral routines and seeded random objects.

mod matrix;
mod random;
mod spectral;

pub use matrix::{
    check_normalized, inner, kron, kron_vec, kron_with_limit, partial_trace, vector_norm, Axis,
    ComplexMatrix, StateVector, Subsystem,
};
pub(crate) use matrix::reduced_from_vector;
pub use random::{
    ginibre, haar_unitary, random_density, random_right_unitary, random_state, RightUnitary,
    SeededRng,
};
pub use spectral::{
    eig_hermitian, eig_unitary, eigen_gap_2x2, eigenvalues_2x2, general_eigenvalues, trace_sqrt_product, Spectrum,
};
