use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::numerics::{eig_hermitian, eig_unitary, ComplexMatrix, RightUnitary, StateVector};
use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Eigenvalues at or below this are outside the support of a density matrix.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Weighted pure states `{q_i, |φ_i⟩}`.
#[derive(Debug, Clone)]
pub struct PureEnsemble {
    weights: Vec<f64>,
    states: Vec<StateVector>,
}

impl PureEnsemble {
    pub fn new(weights: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: states.len(),
            });
        }
        if let Some(&w) = weights.iter().find(|&&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidParameter {
                name: "weight",
                value: w,
                reason: "ensemble weights must be positive",
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::SPECTRAL {
            return Err(Error::InvalidParameter {
                name: "sum of weights",
                value: total,
                reason: "ensemble weights must sum to 1",
            });
        }
        let dim = states[0].len();
        for s in &states {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.len(),
                });
            }
            crate::numerics::check_normalized(s, tol::SPECTRAL)?;
        }
        Ok(Self { weights, states })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &StateVector)> {
        self.weights.iter().copied().zip(self.states.iter())
    }

    /// `Σ q_i |φ_i⟩⟨φ_i|`.
    pub fn density(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (q, s) in self.iter() {
            acc += s * s.adjoint() * C64::new(q, 0.0);
        }
        ComplexMatrix::from_matrix_unchecked(acc)
    }

    pub fn check_realizes(&self, target: &ComplexMatrix, tol: f64) -> Result<()> {
        if target.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: self.dim(),
            });
        }
        let deviation = self.density().max_abs_diff(target);
        if deviation > tol {
            Err(Error::EnsembleMismatch { deviation })
        } else {
            Ok(())
        }
    }
}

/// Number of eigenvalues above [`SUPPORT_CUTOFF`].
pub fn support_rank(target: &ComplexMatrix) -> Result<usize> {
    Ok(eig_hermitian(target)?
        .eigenvalues
        .iter()
        .filter(|z| z.re > SUPPORT_CUTOFF)
        .count())
}

/// Ensemble whose unnormalized members are the columns of `Φ √M T`, where
/// `Φ M Φ†` is the eigendecomposition of `target` restricted to its support.
///
/// Every pure-state decomposition of `target` arises this way for some
/// right unitary `T` with `rows = rank(target)`. Columns of zero weight are
/// dropped.
pub fn decompose_from_t(target: &ComplexMatrix, t: &RightUnitary) -> Result<PureEnsemble> {
    let spectrum = eig_hermitian(target)?;
    let rank = spectrum
        .eigenvalues
        .iter()
        .filter(|z| z.re > SUPPORT_CUTOFF)
        .count();
    if t.rows() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: t.rows(),
        });
    }
    let d = target.dim();
    let phi = spectrum.eigenvectors.as_matrix().columns(0, rank);
    let sqrt_m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        rank,
        spectrum.eigenvalues[..rank].iter().map(|z| C64::new(z.re.sqrt(), 0.0)),
    ));
    let columns = phi * sqrt_m * t.as_matrix();

    let mut weights = Vec::with_capacity(t.cols());
    let mut states = Vec::with_capacity(t.cols());
    for j in 0..t.cols() {
        let v = columns.column(j);
        let w = v.norm_squared();
        if w <= SUPPORT_CUTOFF * SUPPORT_CUTOFF {
            continue;
        }
        weights.push(w);
        states.push(v.unscale(w.sqrt()));
    }
    debug_assert!(states.iter().all(|s| s.len() == d));
    PureEnsemble::new(weights, states)
}

/// Equal-weight ensemble `2^{−n/2} Σ_k e^{2πi jk/2^n} |υ_k⟩` over the
/// eigenvectors `|υ_k⟩` of `U`.
///
/// It realizes the maximally mixed state and every member satisfies
/// `⟨φ_j|U|φ_j⟩ = Tr U / 2^n`.
pub fn fourier_ensemble(u: &ComplexMatrix) -> Result<PureEnsemble> {
    let spectrum = eig_unitary(u)?;
    let d = u.dim();
    let basis = spectrum.eigenvectors.as_matrix();
    let norm = 1.0 / (d as f64).sqrt();
    let dft = DMatrix::from_fn(d, d, |k, j| {
        // (j*k) mod d keeps the phase argument small for large registers
        let phase = 2.0 * core::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
        C64::from_polar(norm, phase)
    });
    let states_matrix = basis * dft;
    let states = (0..d).map(|j| states_matrix.column(j).into_owned()).collect();
    PureEnsemble::new(alloc::vec![1.0 / d as f64; d], states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::normalized_trace;
    use crate::numerics::{haar_unitary, random_density, random_right_unitary, Axis, SeededRng};

    #[test]
    fn identity_t_gives_eigendecomposition() {
        let target = ComplexMatrix::from_real_diagonal(&[0.6, 0.3, 0.1]);
        let t = RightUnitary::new(DMatrix::identity(3, 3)).unwrap();
        let ens = decompose_from_t(&target, &t).unwrap();
        assert_eq!(ens.len(), 3);
        for (k, (q, s)) in ens.iter().enumerate() {
            assert!((q - [0.6, 0.3, 0.1][k]).abs() < 1e-15);
            assert!((s[k].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hadamard_t_on_maximally_mixed_qubit() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let t = RightUnitary::new(ComplexMatrix::hadamard().into_matrix()).unwrap();
        let ens = decompose_from_t(&ComplexMatrix::maximally_mixed(2), &t).unwrap();
        assert!(ens.weights().iter().all(|w| (w - 0.5).abs() < 1e-15));
        let x = ComplexMatrix::pauli(Axis::X);
        let signs: alloc::vec::Vec<f64> = ens
            .states()
            .iter()
            .map(|s| crate::numerics::inner(s, &x.apply(s)).re)
            .collect();
        // (|0⟩ ± |1⟩)/√2 up to phase: ⟨σ_x⟩ = ±1
        assert!((signs[0].abs() - 1.0).abs() < 1e-15 && (signs[0] + signs[1]).abs() < 1e-15);
        assert!(ens.states().iter().all(|s| (s[0].norm() - h).abs() < 1e-15));
    }

    #[test]
    fn random_decompositions_reconstruct_target() {
        let mut rng = SeededRng::new(1, 0);
        for rank in 1..=4 {
            let target = random_density(4, rank, &mut rng).unwrap();
            let t = random_right_unitary(rank, rank + 3, &mut rng).unwrap();
            let ens = decompose_from_t(&target, &t).unwrap();
            // resolution of identity: Σ_j T_ij conj(T_kj) = δ_ik
            ens.check_realizes(&target, 1e-10).unwrap();
        }
    }

    #[test]
    fn decompose_checks_rows_against_rank() {
        let mut rng = SeededRng::new(2, 0);
        let target = random_density(4, 2, &mut rng).unwrap();
        let t = random_right_unitary(4, 6, &mut rng).unwrap();
        assert!(matches!(
            decompose_from_t(&target, &t),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
        assert_eq!(support_rank(&target).unwrap(), 2);
    }

    #[test]
    fn fourier_ensemble_flattens_expectations() {
        let mut rng = SeededRng::new(3, 0);
        for n in 1..=3 {
            let u = haar_unitary(1 << n, &mut rng);
            let ens = fourier_ensemble(&u).unwrap();
            ens.check_realizes(&ComplexMatrix::maximally_mixed(1 << n), 1e-10).unwrap();
            let t = normalized_trace(&u);
            for s in ens.states() {
                assert!((crate::numerics::inner(s, &u.apply(s)) - t).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fourier_ensemble_for_pauli_z() {
        let ens = fourier_ensemble(&ComplexMatrix::pauli(Axis::Z)).unwrap();
        let z = ComplexMatrix::pauli(Axis::Z);
        for s in ens.states() {
            assert!(crate::numerics::inner(s, &z.apply(s)).norm() < 1e-15);
            assert!((s[0].norm() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn ensemble_constructor_validates() {
        let s = StateVector::from_vec(alloc::vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(PureEnsemble::new(alloc::vec![0.5], alloc::vec![s.clone()]).is_err());
        assert!(PureEnsemble::new(alloc::vec![1.0, 0.0], alloc::vec![s.clone(), s.clone()]).is_err());
        let unnormalized = s.clone() * C64::new(2.0, 0.0);
        assert!(PureEnsemble::new(alloc::vec![1.0], alloc::vec![unnormalized]).is_err());
        let ens = PureEnsemble::new(alloc::vec![1.0], alloc::vec![s]).unwrap();
        assert!(matches!(
            ens.check_realizes(&ComplexMatrix::maximally_mixed(2), 1e-10),
            Err(Error::EnsembleMismatch { .. })
        ));
    }
}
