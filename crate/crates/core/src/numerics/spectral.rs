use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use super::ComplexMatrix;
use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

const SCHUR_EPS: f64 = f64::EPSILON;
const SCHUR_MAX_ITER: usize = 100_000;

/// Eigenvalues with eigenvectors stored as the columns of a matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.as_matrix().column(k).into_owned()
    }

    /// `‖A·V − V·diag(λ)‖_max`.
    pub fn reconstruction_error(&self, a: &ComplexMatrix) -> f64 {
        let v = self.eigenvectors.as_matrix();
        let av = a.as_matrix() * v;
        let mut worst: f64 = 0.0;
        for c in 0..v.ncols() {
            for r in 0..v.nrows() {
                worst = worst.max((av[(r, c)] - v[(r, c)] * self.eigenvalues[c]).norm());
            }
        }
        worst
    }

    /// `‖V†V − I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = self.eigenvectors.as_matrix();
        let g = v.adjoint() * v;
        let mut worst: f64 = 0.0;
        for r in 0..g.nrows() {
            for c in 0..g.ncols() {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Ties keep the order produced by the solver.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<Spectrum> {
    let deviation = a.hermiticity_defect();
    if deviation > tol::SPECTRAL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let d = a.dim();
    let vectors = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues: order
            .iter()
            .map(|&k| C64::new(eig.eigenvalues[k], 0.0))
            .collect(),
        eigenvectors: ComplexMatrix::from_matrix_unchecked(vectors),
    })
}

/// Eigendecomposition of a unitary matrix with an orthonormal eigenbasis.
///
/// The complex Schur form of a normal matrix is diagonal, so the Schur
/// vectors are eigenvectors. Columns are then re-orthonormalized inside
/// each cluster of eigenvalues closer than [`tol::DEGENERACY`], and each
/// eigenvalue is refined to the Rayleigh quotient of its vector.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<Spectrum> {
    u.check_unitary(tol::SPECTRAL)?;
    let d = u.dim();
    let schur =
        Schur::try_new(u.as_matrix().clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();
    let raw: Vec<C64> = (0..d).map(|k| t[(k, k)]).collect();

    let mut vectors = q;
    for cluster in degenerate_clusters(&raw, tol::DEGENERACY) {
        gram_schmidt_columns(&mut vectors, &cluster);
    }

    let um = u.as_matrix();
    let eigenvalues = (0..d)
        .map(|k| {
            let v = vectors.column(k);
            v.dotc(&(um * v))
        })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_matrix_unchecked(vectors),
    })
}

/// Groups indices whose eigenvalues are chained within `threshold` of each other.
pub(crate) fn degenerate_clusters(values: &[C64], threshold: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() < threshold {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut heads: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = root(&mut label, i);
        match heads.iter().position(|&h| h == r) {
            Some(p) => clusters[p].push(i),
            None => {
                heads.push(r);
                clusters.push(alloc::vec![i]);
            }
        }
    }
    clusters
}

/// Modified Gram–Schmidt on the listed columns, in place.
pub(crate) fn gram_schmidt_columns(m: &mut DMatrix<C64>, columns: &[usize]) {
    for (pos, &c) in columns.iter().enumerate() {
        for &prev in &columns[..pos] {
            let proj = m.column(prev).dotc(&m.column(c));
            let prev_col = m.column(prev).into_owned();
            m.column_mut(c).axpy(-proj, &prev_col, C64::new(1.0, 0.0));
        }
        let norm = m.column(c).norm();
        if norm > 0.0 {
            m.column_mut(c).unscale_mut(norm);
        }
    }
}

/// `Tr √(U ρ U† · ρ)` from the eigenvalues of the (non-Hermitian) product.
///
/// The product of two positive matrices has a real, nonnegative spectrum;
/// eigenvalues within roundoff of that are clamped, anything further off is
/// reported as [`Error::InvalidSpectrum`].
pub fn trace_sqrt_product(u: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: rho.dim(),
        });
    }
    u.check_unitary(tol::SPECTRAL)?;
    rho.check_density(tol::SPECTRAL)?;
    let rotated = &(u * rho) * &u.adjoint();
    let product = &rotated * rho;
    let mut total = 0.0;
    for mu in general_eigenvalues(&product)? {
        if mu.re < -tol::THEOREM || mu.im.abs() > tol::THEOREM {
            return Err(Error::InvalidSpectrum { re: mu.re, im: mu.im });
        }
        total += mu.re.max(0.0).sqrt();
    }
    Ok(total)
}

/// Eigenvalues of an arbitrary square complex matrix.
pub fn general_eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let d = a.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let schur =
        Schur::try_new(a.as_matrix().clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::NoConvergence)?;
    let (_, t) = schur.unpack();
    Ok((0..d).map(|k| t[(k, k)]).collect())
}

/// Eigenvalues of a 2×2 complex matrix from the characteristic polynomial.
pub fn eigenvalues_2x2(m: [[C64; 2]; 2]) -> [C64; 2] {
    let half_tr = (m[0][0] + m[1][1]) * 0.5;
    let disc = eigen_gap_2x2(m) * 0.5;
    [half_tr + disc, half_tr - disc]
}

/// `μ₁ − μ₂` for the eigenvalues of [`eigenvalues_2x2`], from
/// `((a − d)/2)² + bc`, which avoids cancelling `tr²/4` against `det`.
pub fn eigen_gap_2x2(m: [[C64; 2]; 2]) -> C64 {
    let half_diff = (m[0][0] - m[1][1]) * 0.5;
    (half_diff * half_diff + m[0][1] * m[1][0]).sqrt() * 2.0
}
