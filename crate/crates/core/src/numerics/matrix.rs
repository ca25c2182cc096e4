use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Column vector of complex amplitudes.
pub type StateVector = DVector<C64>;

/// Dense square complex matrix.
///
/// Entries are finite by construction; every constructor that accepts
/// external data checks it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

/// Which factor of a control ⊗ system state to keep in [`partial_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Control,
    System,
}

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl ComplexMatrix {
    pub fn from_matrix(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    /// Wraps a matrix produced by arithmetic on already validated matrices.
    pub(crate) fn from_matrix_unchecked(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    /// Builds a matrix from `dim * dim` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from rows of real numbers.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_matrix_unchecked(DMatrix::from_fn(N, N, |r, c| C64::new(rows[r][c], 0.0)))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::from_matrix_unchecked(DMatrix::from_fn(dim, dim, f))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::identity(dim, dim))
    }

    /// Identity scaled to unit trace.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::identity(dim).scale(1.0 / dim as f64)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self::from_matrix_unchecked(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let diag: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &StateVector) -> Self {
        Self::from_matrix_unchecked(v * v.adjoint())
    }

    pub fn pauli(axis: Axis) -> Self {
        let (o, l, i) = (C64::zero(), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        let entries = match axis {
            Axis::X => [o, l, l, o],
            Axis::Y => [o, -i, i, o],
            Axis::Z => [l, o, o, -l],
        };
        Self::from_matrix_unchecked(DMatrix::from_row_slice(2, 2, &entries))
    }

    pub fn hadamard() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self::from_real_rows([[h, h], [h, -h]])
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.inner
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d * d).map(|k| self.inner[(k / d, k % d)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix_unchecked(self.inner.adjoint())
    }

    /// Complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self::from_matrix_unchecked(self.inner.map(|z| z.conj()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_matrix_unchecked(self.inner.map(|z| z * factor))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self::from_matrix_unchecked(self.inner.map(|z| z * factor))
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    /// `Tr(ρ²)` for a Hermitian matrix, computed without forming the square.
    pub fn purity(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        &self.inner * v
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in max_abs_diff");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.inner[(r, c)] - self.inner[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `‖A·A† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.inner * self.inner.adjoint();
        prod.iter()
            .enumerate()
            .map(|(k, z)| {
                let d = self.dim();
                let diag = if k % d == k / d { 1.0 } else { 0.0 };
                (z - C64::new(diag, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_density(&self, tol: f64) -> bool {
        self.check_density(tol).is_ok()
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::NotDensity {
                reason: alloc::format!("trace {} differs from 1", tr.re),
            });
        }
        let spectrum = super::eig_hermitian(self)?;
        let min = spectrum
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::NotDensity {
                reason: alloc::format!("negative eigenvalue {min}"),
            });
        }
        Ok(())
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_defect();
        if deviation > tol {
            Err(Error::NotUnitary { deviation })
        } else {
            Ok(())
        }
    }

    /// Sub-block `[row0.., col0..]` of size `size`.
    pub(crate) fn block(&self, row0: usize, col0: usize, size: usize) -> DMatrix<C64> {
        self.inner.view((row0, col0), (size, size)).into_owned()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix::from_matrix_unchecked(&self.inner * &rhs.inner)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sum");
        ComplexMatrix::from_matrix_unchecked(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in difference");
        ComplexMatrix::from_matrix_unchecked(&self.inner - &rhs.inner)
    }
}

/// Kronecker product with `a` as the outer factor, capped at [`tol::MAX_DIM`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, tol::MAX_DIM)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::DimensionTooLarge { dim: usize::MAX, max: max_dim })?;
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    Ok(ComplexMatrix::from_matrix_unchecked(a.inner.kronecker(&b.inner)))
}

/// Kronecker product of two vectors, `a` outer.
pub fn kron_vec(a: &StateVector, b: &StateVector) -> StateVector {
    a.kronecker(b)
}

/// Partial trace of a state on `C² ⊗ C^system_dim` (control is the outer factor).
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem, system_dim: usize) -> Result<ComplexMatrix> {
    partial_trace_dims(rho, keep, 2, system_dim)
}

pub(crate) fn partial_trace_dims(
    rho: &ComplexMatrix,
    keep: Subsystem,
    control_dim: usize,
    system_dim: usize,
) -> Result<ComplexMatrix> {
    let expected = control_dim * system_dim;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    let m = rho.as_matrix();
    let out = match keep {
        Subsystem::Control => DMatrix::from_fn(control_dim, control_dim, |c1, c2| {
            (0..system_dim)
                .map(|s| m[(c1 * system_dim + s, c2 * system_dim + s)])
                .sum()
        }),
        Subsystem::System => DMatrix::from_fn(system_dim, system_dim, |s1, s2| {
            (0..control_dim)
                .map(|c| m[(c * system_dim + s1, c * system_dim + s2)])
                .sum()
        }),
    };
    Ok(ComplexMatrix::from_matrix_unchecked(out))
}

/// Reduced state of a pure vector on `C^control_dim ⊗ C^system_dim`, without forming the projector.
pub(crate) fn reduced_from_vector(psi: &StateVector, keep: Subsystem, system_dim: usize) -> ComplexMatrix {
    let control_dim = psi.len() / system_dim;
    let amp = |c: usize, s: usize| psi[c * system_dim + s];
    let out = match keep {
        Subsystem::Control => DMatrix::from_fn(control_dim, control_dim, |c1, c2| {
            (0..system_dim).map(|s| amp(c1, s) * amp(c2, s).conj()).sum()
        }),
        Subsystem::System => DMatrix::from_fn(system_dim, system_dim, |s1, s2| {
            (0..control_dim).map(|c| amp(c, s1) * amp(c, s2).conj()).sum()
        }),
    };
    ComplexMatrix::from_matrix_unchecked(out)
}

pub fn vector_norm(v: &StateVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn check_normalized(v: &StateVector, tol: f64) -> Result<()> {
    let norm = vector_norm(v);
    if (norm - 1.0).abs() > tol {
        Err(Error::NotNormalized { norm })
    } else {
        Ok(())
    }
}

/// `⟨a|b⟩`.
pub fn inner(a: &StateVector, b: &StateVector) -> C64 {
    a.dotc(b)
}
