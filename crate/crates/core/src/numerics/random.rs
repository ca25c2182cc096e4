use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, StateVector};
use crate::{tol, Error, Result, C64};

/// Deterministic random source addressed by `(seed, stream)`.
///
/// Each stream is an independent ChaCha20 keystream under the same key, so
/// concurrent tasks can be handed disjoint streams via [`SeededRng::fork`].
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Child generator on a stream derived from this stream and `index`.
    ///
    /// Forking does not advance `self`.
    pub fn fork(&self, index: u64) -> Self {
        Self::new(self.seed, splitmix64(self.stream ^ splitmix64(index.wrapping_add(1))))
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Circularly symmetric complex normal with `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let re = self.standard_normal();
        let im = self.standard_normal();
        C64::new(re * s, im * s)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Rectangular matrix of i.i.d. complex normals.
pub fn ginibre(rows: usize, cols: usize, rng: &mut SeededRng) -> DMatrix<C64> {
    // fill row-major so the draw order does not depend on storage layout
    let entries: Vec<C64> = (0..rows * cols).map(|_| rng.complex_normal()).collect();
    DMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let qr = ginibre(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for z in q.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    ComplexMatrix::from_matrix_unchecked(q)
}

/// Random density matrix `G G† / Tr(G G†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density(dim: usize, rank: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter {
            name: "rank",
            value: rank as f64,
            reason: "must lie in 1..=dim",
        });
    }
    let g = ginibre(dim, rank, rng);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.unscale_mut(tr);
    // exact Hermitian symmetry
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    Ok(ComplexMatrix::from_matrix_unchecked(rho))
}

/// Uniformly random unit vector.
pub fn random_state(dim: usize, rng: &mut SeededRng) -> StateVector {
    let v = DVector::from_iterator(dim, (0..dim).map(|_| rng.complex_normal()));
    let norm = v.norm();
    v.unscale(norm)
}

/// `r × K` matrix with orthonormal rows, `T·T† = I_r`.
///
/// Entry `(i, j)` weights the `i`-th eigenvector in the `j`-th member of an
/// ensemble; see [`crate::entpower::decompose_from_t`].
#[derive(Debug, Clone, PartialEq)]
pub struct RightUnitary {
    inner: DMatrix<C64>,
}

impl RightUnitary {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.ncols() < inner.nrows() {
            return Err(Error::InvalidParameter {
                name: "cols",
                value: inner.ncols() as f64,
                reason: "a right unitary needs at least as many columns as rows",
            });
        }
        let t = Self { inner };
        let deviation = t.row_orthonormality_defect();
        if deviation > tol::SPECTRAL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(t)
    }

    pub(crate) fn from_matrix_unchecked(inner: DMatrix<C64>) -> Self {
        Self { inner }
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    /// `‖T·T† − I‖_max`.
    pub fn row_orthonormality_defect(&self) -> f64 {
        let g = &self.inner * self.inner.adjoint();
        let mut worst: f64 = 0.0;
        for r in 0..g.nrows() {
            for c in 0..g.ncols() {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// `Σ_j |T_ij|²` for every row `i`.
    pub fn row_norm_sums(&self) -> Vec<f64> {
        (0..self.rows())
            .map(|r| self.inner.row(r).iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }
}

/// First `rows` rows of a Haar unitary of size `cols`.
pub fn random_right_unitary(rows: usize, cols: usize, rng: &mut SeededRng) -> Result<RightUnitary> {
    if cols < rows {
        return Err(Error::InvalidParameter {
            name: "cols",
            value: cols as f64,
            reason: "must be at least the number of rows",
        });
    }
    let u = haar_unitary(cols, rng);
    let t = u.as_matrix().rows(0, rows).into_owned();
    Ok(RightUnitary::from_matrix_unchecked(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_hermitian;

    #[test]
    fn same_seed_and_stream_reproduce_bits() {
        let a = haar_unitary(6, &mut SeededRng::new(11, 3));
        let b = haar_unitary(6, &mut SeededRng::new(11, 3));
        assert_eq!(a.to_row_major(), b.to_row_major());
        let c = haar_unitary(6, &mut SeededRng::new(11, 4));
        assert_ne!(a.to_row_major(), c.to_row_major());
    }

    #[test]
    fn fork_is_deterministic_and_leaves_parent_untouched() {
        let mut parent = SeededRng::new(5, 0);
        let mut x = parent.fork(2);
        let mut y = parent.fork(2);
        assert_eq!(x.next_u64(), y.next_u64());
        assert_ne!(parent.fork(2).stream(), parent.fork(3).stream());
        let first = parent.next_u64();
        assert_eq!(first, SeededRng::new(5, 0).next_u64());
    }

    #[test]
    fn haar_dim_one_is_a_phase() {
        let u = haar_unitary(1, &mut SeededRng::new(1, 0));
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_draws_are_unitary() {
        let mut rng = SeededRng::new(2, 0);
        for dim in [2, 3, 4, 8, 16] {
            assert!(haar_unitary(dim, &mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn random_density_properties() {
        let mut rng = SeededRng::new(9, 0);
        let pure = random_density(4, 1, &mut rng).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);

        let full = random_density(2, 2, &mut rng).unwrap();
        let ev = eig_hermitian(&full).unwrap().real_eigenvalues();
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        for rank in 1..=6 {
            let rho = random_density(6, rank, &mut rng).unwrap();
            assert!(rho.is_density(1e-10));
            let ev = eig_hermitian(&rho).unwrap().real_eigenvalues();
            assert!(ev.iter().all(|&x| x >= -1e-12));
            assert_eq!(ev.iter().filter(|&&x| x > 1e-10).count(), rank);
        }
        assert!(random_density(3, 4, &mut rng).is_err());
    }

    #[test]
    fn right_unitary_rows_are_orthonormal() {
        let mut rng = SeededRng::new(4, 0);
        let t = random_right_unitary(2, 4, &mut rng).unwrap();
        assert!(t.row_orthonormality_defect() < 1e-12);
        for s in t.row_norm_sums() {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let square = random_right_unitary(3, 3, &mut rng).unwrap();
        let full = ComplexMatrix::from_matrix(square.as_matrix().clone()).unwrap();
        assert!(full.is_unitary(1e-12));
        assert!(random_right_unitary(4, 2, &mut rng).is_err());
    }

    #[test]
    fn right_unitary_constructor_validates() {
        assert!(RightUnitary::new(DMatrix::identity(2, 3)).is_ok());
        assert!(RightUnitary::new(DMatrix::identity(3, 2)).is_err());
        let scaled = DMatrix::<C64>::identity(2, 2) * C64::new(2.0, 0.0);
        assert!(matches!(RightUnitary::new(scaled), Err(Error::NotUnitary { .. })));
    }
}
