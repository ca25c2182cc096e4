use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen, Vector2};

use crate::circuit::{control_superposition, ControlQubit};
use crate::numerics::{eigen_gap_2x2, ComplexMatrix, RightUnitary, StateVector};
use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Control amplitudes `(x_j, y_j)` after the Hadamard for each member of a
/// control-state decomposition, with `r_j = |x_j|² + |y_j|²`.
#[derive(Debug, Clone)]
pub struct BranchCoefficients {
    pub xs: Vec<C64>,
    pub ys: Vec<C64>,
    pub rs: Vec<f64>,
    pub source_t: RightUnitary,
}

impl BranchCoefficients {
    pub fn len(&self) -> usize {
        self.rs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rs.is_empty()
    }

    /// Normalized `(x_j|0⟩|φ⟩ + y_j|1⟩U|φ⟩)/√r_j`, or `None` when `r_j = 0`.
    pub fn branch_state(&self, j: usize, phi: &StateVector, u_phi: &StateVector) -> Option<StateVector> {
        let r = self.rs[j];
        if r <= 0.0 {
            return None;
        }
        let s = 1.0 / r.sqrt();
        Some(control_superposition(self.xs[j] * s, self.ys[j] * s, phi, u_phi))
    }
}

/// Eigenvectors (columns) and eigenvalues `(1 ± Γ)/2` of the control state.
///
/// The first column is `(cos θ/2, e^{iφ} sin θ/2)` and the second
/// `(−e^{−iφ} sin θ/2, cos θ/2)`, so the basis is the identity on the z axis.
pub fn control_eigendecomposition(control: &ControlQubit) -> (Matrix2<C64>, [f64; 2]) {
    let gamma = control.polarization();
    let (s, c) = (0.5 * control.polar_angle()).sin_cos();
    let phi = control.azimuth();
    let basis = Matrix2::new(
        C64::new(c, 0.0),
        -C64::from_polar(s, -phi),
        C64::from_polar(s, phi),
        C64::new(c, 0.0),
    );
    (basis, [0.5 * (1.0 + gamma), 0.5 * (1.0 - gamma)])
}

/// `Φ′ √M′`: column `i` is the `i`-th control eigenvector scaled by the root of its weight.
fn weighted_basis(control: &ControlQubit) -> Matrix2<C64> {
    let (basis, m) = control_eigendecomposition(control);
    let mut w = basis;
    for (i, mi) in m.iter().enumerate() {
        let r = mi.max(0.0).sqrt();
        for z in w.column_mut(i).iter_mut() {
            *z *= r;
        }
    }
    w
}

pub fn branch_coefficients(control: &ControlQubit, t: &RightUnitary) -> Result<BranchCoefficients> {
    if t.rows() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: t.rows(),
        });
    }
    let defect = t.row_orthonormality_defect();
    if defect > tol::SPECTRAL {
        return Err(Error::NotUnitary { deviation: defect });
    }
    let w = weighted_basis(control);
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let k = t.cols();
    let (mut xs, mut ys, mut rs) = (Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k));
    for j in 0..k {
        let v = w * Vector2::new(t.get(0, j), t.get(1, j));
        let x = (v[0] + v[1]) * h;
        let y = (v[0] - v[1]) * h;
        xs.push(x);
        ys.push(y);
        rs.push(x.norm_sqr() + y.norm_sqr());
    }
    Ok(BranchCoefficients {
        xs,
        ys,
        rs,
        source_t: t.clone(),
    })
}

/// `Σ_j 2|x_j||y_j|`.
pub fn mixing_factor(bc: &BranchCoefficients) -> f64 {
    bc.xs.iter().zip(&bc.ys).map(|(x, y)| 2.0 * x.norm() * y.norm()).sum()
}

/// `λ₁ − λ₂`, with `λ_i` the square roots of the eigenvalues of `ρ_c σ_z ρ_c* σ_z`
/// in decreasing order.
pub fn lambda_factor(control: &ControlQubit) -> f64 {
    let rho = control.density();
    let z = ComplexMatrix::pauli(crate::numerics::Axis::Z);
    let r = &(&(&rho * &z) * &rho.conjugate()) * &z;
    let m = [[r.get(0, 0), r.get(0, 1)], [r.get(1, 0), r.get(1, 1)]];
    // λ₁λ₂ = det ρ_c, so λ₁ + λ₂ = √(Tr R + 2 det ρ_c)
    let det = (rho.get(0, 0) * rho.get(1, 1) - rho.get(0, 1) * rho.get(1, 0)).re;
    let sum = ((m[0][0] + m[1][1]).re + 2.0 * det).max(0.0).sqrt();
    if sum == 0.0 {
        return 0.0;
    }
    // λ₁ − λ₂ = (μ₁ − μ₂)/(λ₁ + λ₂)
    (eigen_gap_2x2(m).re.abs() / sum).clamp(0.0, 1.0)
}

/// 2×2 right unitary attaining the minimal mixing factor `λ₁ − λ₂`.
///
/// With `W = Φ′√M′` the quantity `2|x_j||y_j|` equals `|w_jᵀ σ_z w_j|` for
/// `w_j = W T_{:,j}`. A Takagi factorization `Vᵀ(Wᵀσ_zW)V = diag(s₁, s₂)`
/// followed by the phase mix `[[1, 1], [i, −i]]/√2` makes every column
/// contribute `(s₁ − s₂)/2`. On the z axis this is the real Hadamard.
pub fn analytic_minimizer(control: &ControlQubit) -> RightUnitary {
    let w = weighted_basis(control);
    let sz = Matrix2::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    );
    let mut tau = w.transpose() * sz * w;
    // exact symmetry
    let off = (tau[(0, 1)] + tau[(1, 0)]) * 0.5;
    tau[(0, 1)] = off;
    tau[(1, 0)] = off;

    let q = takagi_vectors(&tau);
    let v = q.map(|z| z.conj());
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mix = Matrix2::new(
        C64::new(h, 0.0),
        C64::new(h, 0.0),
        C64::new(0.0, h),
        C64::new(0.0, -h),
    );
    let t = v * mix;
    RightUnitary::from_matrix_unchecked(DMatrix::from_fn(2, 2, |r, c| t[(r, c)]))
}

/// Unitary `Q` with `τ = Q Σ Qᵀ`, `Σ ≥ 0` diagonal, for complex symmetric 2×2 `τ`.
///
/// The antilinear map `x ↦ τ x̄` is a real symmetric operator on `R⁴` with
/// eigenvalues `±s₁, ±s₂`. Its top eigenvector is the first Takagi vector; a
/// small residual keeps the off-diagonal of `Q†τQ̄` at roundoff level even
/// when `s₁ ≈ s₂`.
fn takagi_vectors(tau: &Matrix2<C64>) -> Matrix2<C64> {
    let re = tau.map(|z| z.re);
    let im = tau.map(|z| z.im);
    let mut embed = Matrix4::<f64>::zeros();
    embed.fixed_view_mut::<2, 2>(0, 0).copy_from(&re);
    embed.fixed_view_mut::<2, 2>(0, 2).copy_from(&im);
    embed.fixed_view_mut::<2, 2>(2, 0).copy_from(&im);
    embed.fixed_view_mut::<2, 2>(2, 2).copy_from(&(-re));
    let eig = SymmetricEigen::new(embed);
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let mut q1 = Vector2::new(C64::new(v[0], v[2]), C64::new(v[1], v[3]));
    q1 /= C64::new(q1.norm(), 0.0);
    let mut q2 = Vector2::new(-q1[1].conj(), q1[0].conj());
    fix_phase(tau, &mut q1);
    fix_phase(tau, &mut q2);
    Matrix2::from_columns(&[q1, q2])
}

/// Rotate `q` so that `q† τ q*` is real and nonnegative.
fn fix_phase(tau: &Matrix2<C64>, q: &mut Vector2<C64>) {
    let c = q.dotc(&(tau * q.map(|z| z.conj())));
    if c.norm() > 0.0 {
        *q *= C64::from_polar(1.0, 0.5 * c.arg());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{random_right_unitary, SeededRng};

    fn identity_t(k: usize) -> RightUnitary {
        RightUnitary::new(DMatrix::identity(2, k)).unwrap()
    }

    fn hadamard_t() -> RightUnitary {
        RightUnitary::new(ComplexMatrix::hadamard().into_matrix()).unwrap()
    }

    #[test]
    fn pure_control_identity_t() {
        let bc = branch_coefficients(&ControlQubit::pure_zero(), &identity_t(2)).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((bc.xs[0] - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((bc.ys[0] - C64::new(h, 0.0)).norm() < 1e-15);
        assert!(bc.xs[1].norm() < 1e-15 && bc.ys[1].norm() < 1e-15);
        assert!((mixing_factor(&bc) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_control_mixing_is_one_for_any_t() {
        let mut rng = SeededRng::new(1, 0);
        for _ in 0..20 {
            let t = random_right_unitary(2, 4, &mut rng).unwrap();
            let bc = branch_coefficients(&ControlQubit::pure_zero(), &t).unwrap();
            assert!((mixing_factor(&bc) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_mode_plug_in_values() {
        for alpha in [0.0, 0.25, 0.6, 1.0] {
            let c = ControlQubit::alpha(alpha).unwrap();
            let id = branch_coefficients(&c, &identity_t(2)).unwrap();
            // ½(1+α) + ½(1−α)
            assert!((mixing_factor(&id) - 1.0).abs() < 1e-15);
            let had = branch_coefficients(&c, &hadamard_t()).unwrap();
            assert!((mixing_factor(&had) - alpha).abs() < 1e-15);
            assert!((id.rs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn alpha_coefficients_match_plug_in_formula() {
        let alpha = 0.4;
        let mut rng = SeededRng::new(2, 0);
        let t = random_right_unitary(2, 3, &mut rng).unwrap();
        let bc = branch_coefficients(&ControlQubit::alpha(alpha).unwrap(), &t).unwrap();
        let (a, b) = (((1.0 + alpha) / 2.0).sqrt(), ((1.0 - alpha) / 2.0).sqrt());
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for j in 0..3 {
            let x = (t.get(0, j) * a + t.get(1, j) * b) * h;
            let y = (t.get(0, j) * a - t.get(1, j) * b) * h;
            assert!((bc.xs[j] - x).norm() < 1e-15 && (bc.ys[j] - y).norm() < 1e-15);
        }
    }

    #[test]
    fn modes_agree_on_z_axis() {
        let mut rng = SeededRng::new(3, 0);
        let t = random_right_unitary(2, 4, &mut rng).unwrap();
        for alpha in [0.0, 0.3, 1.0] {
            let a = branch_coefficients(&ControlQubit::alpha(alpha).unwrap(), &t).unwrap();
            let b = branch_coefficients(&ControlQubit::bloch([0.0, 0.0, alpha]).unwrap(), &t).unwrap();
            assert_eq!(a.xs, b.xs);
            assert_eq!(a.ys, b.ys);
            assert_eq!(lambda_factor(&ControlQubit::Alpha(alpha)), lambda_factor(&ControlQubit::Bloch([0.0, 0.0, alpha])));
        }
    }

    #[test]
    fn eigendecomposition_reconstructs_control() {
        for p in [[0.3, 0.4, 0.5], [0.0, 0.0, -0.7], [-0.2, 0.0, 0.1], [0.0, 0.0, 0.0]] {
            let c = ControlQubit::bloch(p).unwrap();
            let (basis, m) = control_eigendecomposition(&c);
            let rebuilt = basis * Matrix2::new(C64::new(m[0], 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(m[1], 0.0)) * basis.adjoint();
            let rho = c.density();
            for r in 0..2 {
                for col in 0..2 {
                    assert!((rebuilt[(r, col)] - rho.get(r, col)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn lambda_factor_examples() {
        assert!((lambda_factor(&ControlQubit::pure_zero()) - 1.0).abs() < 1e-15);
        assert!(lambda_factor(&ControlQubit::Alpha(0.0)).abs() < 1e-15);
        for alpha in [0.1, 0.5, 0.9] {
            assert!((lambda_factor(&ControlQubit::Alpha(alpha)) - alpha).abs() < 1e-12);
        }
        // hand-derived: λ₁ − λ₂ = √(P₂² + P₃²)
        let l = lambda_factor(&ControlQubit::Bloch([0.3, 0.4, 0.5]));
        assert!((l - 0.41f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn analytic_minimizer_attains_lambda() {
        let mut rng = SeededRng::new(4, 0);
        let mut controls = alloc::vec![
            ControlQubit::Bloch([0.3, 0.4, 0.5]),
            ControlQubit::Bloch([1.0, 0.0, 0.0]),
            ControlQubit::Bloch([0.6, 0.0, 0.0]),
            ControlQubit::Bloch([0.0, 0.0, 0.0]),
            ControlQubit::Bloch([0.0, 1e-9, 0.0]),
            ControlQubit::Alpha(0.0),
            ControlQubit::Alpha(1.0),
        ];
        for _ in 0..200 {
            let v = [rng.standard_normal(), rng.standard_normal(), rng.standard_normal()];
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let radius = (rng.standard_normal().abs()).min(1.0);
            controls.push(ControlQubit::Bloch(v.map(|x| x / norm * radius)));
        }
        for c in controls {
            let t = analytic_minimizer(&c);
            assert!(t.row_orthonormality_defect() < 1e-12);
            let bc = branch_coefficients(&c, &t).unwrap();
            assert!((mixing_factor(&bc) - lambda_factor(&c)).abs() < 1e-12, "{c:?} {} {}", mixing_factor(&bc), lambda_factor(&c));
        }
    }

    #[test]
    fn alpha_minimizer_is_real_hadamard() {
        let t = analytic_minimizer(&ControlQubit::Alpha(0.3));
        let bc = branch_coefficients(&ControlQubit::Alpha(0.3), &t).unwrap();
        assert!((mixing_factor(&bc) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_row_count() {
        let t = RightUnitary::new(DMatrix::identity(3, 3)).unwrap();
        assert!(branch_coefficients(&ControlQubit::pure_zero(), &t).is_err());
    }
}
