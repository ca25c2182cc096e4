//! The one-clean-qubit circuit: a Hadamard on the control followed by a
//! controlled unitary on an `n`-qubit register.
//!
//! Joint states are laid out control-outer, `ρ_c ⊗ ρ_system`, so the joint
//! matrix splits into four `2^n × 2^n` blocks indexed by the control basis.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::numerics::{
    check_normalized, kron, partial_trace, Axis, ComplexMatrix, StateVector, Subsystem,
};
use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// State of the control qubit, `ρ_c = ½(1 + P·σ)`.
///
/// `Alpha(α)` is the polarized control `½(1 + ασ_z)`; it is handled as the
/// Bloch vector `(0, 0, α)` everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlQubit {
    Alpha(f64),
    Bloch([f64; 3]),
}

impl ControlQubit {
    pub fn alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "polarization must lie in [0, 1]",
            });
        }
        Ok(Self::Alpha(alpha))
    }

    pub fn bloch(p: [f64; 3]) -> Result<Self> {
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if !norm.is_finite() || norm > 1.0 + tol::CONSTRUCTION {
            return Err(Error::InvalidParameter {
                name: "|P|",
                value: norm,
                reason: "Bloch vector must have norm at most 1",
            });
        }
        Ok(Self::Bloch(p))
    }

    /// The clean qubit `|0⟩⟨0|`.
    pub fn pure_zero() -> Self {
        Self::Alpha(1.0)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        match *self {
            Self::Alpha(a) => [0.0, 0.0, a],
            Self::Bloch(p) => p,
        }
    }

    /// `Γ = ‖P‖`.
    pub fn polarization(&self) -> f64 {
        let p = self.bloch_vector();
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
    }

    /// Polar angle of `P`; zero for the maximally mixed state.
    pub fn polar_angle(&self) -> f64 {
        let p = self.bloch_vector();
        let gamma = self.polarization();
        if gamma == 0.0 {
            0.0
        } else {
            (p[2] / gamma).clamp(-1.0, 1.0).acos()
        }
    }

    /// Azimuth of `P`; zero when `P` lies on the z axis.
    pub fn azimuth(&self) -> f64 {
        let p = self.bloch_vector();
        if p[0] == 0.0 && p[1] == 0.0 {
            0.0
        } else {
            p[1].atan2(p[0])
        }
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.polarization() - 1.0).abs() <= tol
    }

    pub fn density(&self) -> ComplexMatrix {
        bloch_density(self.bloch_vector())
    }
}

fn bloch_density(p: [f64; 3]) -> ComplexMatrix {
    let entries = [
        C64::new(0.5 * (1.0 + p[2]), 0.0),
        C64::new(0.5 * p[0], -0.5 * p[1]),
        C64::new(0.5 * p[0], 0.5 * p[1]),
        C64::new(0.5 * (1.0 - p[2]), 0.0),
    ];
    ComplexMatrix::from_row_major(2, &entries).expect("2x2 from four finite entries")
}

/// Number of qubits `n` of a register of dimension `2^n`.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter {
            name: "dim",
            value: dim as f64,
            reason: "register dimension must be 2^n with n >= 1",
        });
    }
    let n = dim.trailing_zeros() as usize;
    if n > tol::MAX_QUBITS {
        return Err(Error::DimensionTooLarge {
            dim,
            max: 1 << tol::MAX_QUBITS,
        });
    }
    Ok(n)
}

/// A configured circuit: unitary, control state and register state.
#[derive(Debug, Clone)]
pub struct Dqc1Instance {
    n: usize,
    unitary: ComplexMatrix,
    control: ControlQubit,
    system_state: ComplexMatrix,
}

impl Dqc1Instance {
    /// Circuit acting on the maximally mixed register `I/2^n`.
    pub fn new(unitary: ComplexMatrix, control: ControlQubit) -> Result<Self> {
        let n = qubit_count(unitary.dim())?;
        unitary.check_unitary(tol::SPECTRAL)?;
        let system_state = ComplexMatrix::maximally_mixed(unitary.dim());
        Ok(Self {
            n,
            unitary,
            control,
            system_state,
        })
    }

    pub fn with_system_state(mut self, rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != self.unitary.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.unitary.dim(),
                found: rho.dim(),
            });
        }
        rho.check_density(tol::SPECTRAL)?;
        self.system_state = rho;
        Ok(self)
    }

    pub fn with_control(mut self, control: ControlQubit) -> Self {
        self.control = control;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn system_dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn control(&self) -> &ControlQubit {
        &self.control
    }

    pub fn system_state(&self) -> &ComplexMatrix {
        &self.system_state
    }

    /// True when the register is `I/2^n` within `tol`.
    pub fn has_maximally_mixed_register(&self, tol: f64) -> bool {
        self.system_state
            .max_abs_diff(&ComplexMatrix::maximally_mixed(self.system_dim()))
            <= tol
    }

    /// `Tr(U ρ_n)`, which reduces to the normalized trace for `ρ_n = I/2^n`.
    pub fn weighted_trace(&self) -> C64 {
        (&self.unitary * &self.system_state).trace()
    }
}

/// `Tr U / dim`.
pub fn normalized_trace(u: &ComplexMatrix) -> C64 {
    u.trace() / u.dim() as f64
}

/// `ρ_0 = ρ_c ⊗ ρ_n`.
pub fn initial_state(inst: &Dqc1Instance) -> ComplexMatrix {
    kron(&inst.control.density(), &inst.system_state).expect("joint dimension is capped by MAX_QUBITS")
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`.
pub fn controlled_u(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    u.check_unitary(tol::SPECTRAL)?;
    let d = u.dim();
    let mut out = DMatrix::<C64>::zeros(2 * d, 2 * d);
    for k in 0..d {
        out[(k, k)] = C64::new(1.0, 0.0);
    }
    out.view_mut((d, d), (d, d)).copy_from(u.as_matrix());
    ComplexMatrix::from_matrix(out)
}

/// The full circuit unitary `controlled_u(U) · (H ⊗ I)`.
pub fn circuit_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let hadamard = kron(&ComplexMatrix::hadamard(), &ComplexMatrix::identity(u.dim()))?;
    Ok(&controlled_u(u)? * &hadamard)
}

fn split_blocks(rho: &ComplexMatrix, d: usize) -> [[DMatrix<C64>; 2]; 2] {
    [
        [rho.block(0, 0, d), rho.block(0, d, d)],
        [rho.block(d, 0, d), rho.block(d, d, d)],
    ]
}

fn join_blocks(blocks: [[DMatrix<C64>; 2]; 2], d: usize) -> ComplexMatrix {
    let mut out = DMatrix::<C64>::zeros(2 * d, 2 * d);
    for (a, row) in blocks.iter().enumerate() {
        for (b, block) in row.iter().enumerate() {
            out.view_mut((a * d, b * d), (d, d)).copy_from(block);
        }
    }
    ComplexMatrix::from_matrix_unchecked(out)
}

/// Conjugates a joint state by `G ⊗ I` for a single-qubit gate `G` on the control.
pub fn apply_control_gate(rho: &ComplexMatrix, gate: &ComplexMatrix, system_dim: usize) -> ComplexMatrix {
    let b = split_blocks(rho, system_dim);
    let g = |r: usize, c: usize| gate.get(r, c);
    let mut out: [[DMatrix<C64>; 2]; 2] = Default::default();
    for (a, row) in out.iter_mut().enumerate() {
        for (bb, slot) in row.iter_mut().enumerate() {
            let mut acc = DMatrix::<C64>::zeros(system_dim, system_dim);
            for (c, block_row) in b.iter().enumerate() {
                for (e, block) in block_row.iter().enumerate() {
                    // (G ρ G†)_{ab} = Σ G_ac ρ_ce conj(G_be)
                    acc += block * (g(a, c) * g(bb, e).conj());
                }
            }
            *slot = acc;
        }
    }
    join_blocks(out, system_dim)
}

/// Conjugates a joint state by `controlled_u(U)`.
pub fn apply_controlled(rho: &ComplexMatrix, u: &ComplexMatrix) -> ComplexMatrix {
    let d = u.dim();
    let [[b00, b01], [b10, b11]] = split_blocks(rho, d);
    let um = u.as_matrix();
    let ua = um.adjoint();
    join_blocks([[b00, b01 * &ua], [um * b10, um * b11 * &ua]], d)
}

/// Final joint state `V ρ_0 V†`, applied gate by gate.
pub fn evolve(inst: &Dqc1Instance) -> ComplexMatrix {
    let d = inst.system_dim();
    let after_h = apply_control_gate(&initial_state(inst), &ComplexMatrix::hadamard(), d);
    apply_controlled(&after_h, &inst.unitary)
}

/// Closed form of the final state for a polarized control and maximally mixed register:
/// `2^{−(n+1)} (|0⟩⟨0|⊗I + |1⟩⟨1|⊗I + α|0⟩⟨1|⊗U† + α|1⟩⟨0|⊗U)`.
pub fn final_state_closed(alpha: f64, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "polarization must lie in [0, 1]",
        });
    }
    let d = u.dim();
    let scale = 1.0 / (2 * d) as f64;
    let identity = DMatrix::<C64>::identity(d, d) * C64::new(scale, 0.0);
    let coherence = u.as_matrix() * C64::new(alpha * scale, 0.0);
    Ok(join_blocks(
        [
            [identity.clone(), coherence.adjoint()],
            [coherence, identity],
        ],
        d,
    ))
}

/// `(|0⟩|φ⟩ + |1⟩U|φ⟩)/√2`, the output for the clean control and register input `|φ⟩`.
pub fn branch_pure_state(phi: &StateVector, u: &ComplexMatrix) -> Result<StateVector> {
    check_normalized(phi, tol::CONSTRUCTION)?;
    if phi.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: phi.len(),
        });
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    Ok(control_superposition(C64::new(h, 0.0), C64::new(h, 0.0), phi, &u.apply(phi)))
}

/// `x|0⟩|a⟩ + y|1⟩|b⟩`.
pub(crate) fn control_superposition(x: C64, y: C64, a: &StateVector, b: &StateVector) -> StateVector {
    let d = a.len();
    StateVector::from_iterator(2 * d, a.iter().map(|z| z * x).chain(b.iter().map(|z| z * y)))
}

/// Register state of [`branch_pure_state`] after tracing out the control:
/// `½(|φ⟩⟨φ| + U|φ⟩⟨φ|U†)`.
pub fn reduced_system_state(phi: &StateVector, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_normalized(phi, tol::CONSTRUCTION)?;
    if phi.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: phi.len(),
        });
    }
    let uphi = u.apply(phi);
    let sum = &ComplexMatrix::projector(phi) + &ComplexMatrix::projector(&uphi);
    Ok(sum.scale(0.5))
}

/// Control-qubit state after the circuit for register state `ρ_n`,
/// obtained by evolving the joint state and tracing out the register.
pub fn general_final_control(
    control: &ControlQubit,
    rho_n: &ComplexMatrix,
    u: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if rho_n.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: rho_n.dim(),
        });
    }
    u.check_unitary(tol::SPECTRAL)?;
    let joint = kron(&control.density(), rho_n)?;
    let after_h = apply_control_gate(&joint, &ComplexMatrix::hadamard(), u.dim());
    let out = apply_controlled(&after_h, u);
    partial_trace(&out, Subsystem::Control, u.dim())
}

/// Linear entropy `1 − Tr ρ_f²` of the final control state in closed form,
/// `½(1 − P₁² − (P₂² + P₃²)|t|²)` with `t = Tr(U ρ_n)`.
pub fn linear_entropy_closed(p: [f64; 3], t: C64) -> Result<f64> {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if norm > 1.0 + tol::CONSTRUCTION {
        return Err(Error::InvalidParameter {
            name: "|P|",
            value: norm,
            reason: "Bloch vector must have norm at most 1",
        });
    }
    if t.norm() > 1.0 + tol::THEOREM {
        return Err(Error::InvalidParameter {
            name: "|t|",
            value: t.norm(),
            reason: "Tr(U rho) has modulus at most 1",
        });
    }
    Ok(0.5 * (1.0 - p[0] * p[0] - (p[1] * p[1] + p[2] * p[2]) * t.norm_sqr()))
}

/// Tensor product of single-qubit Paulis, e.g. `"XIZ"`; the first letter is the outer factor.
pub fn pauli_string(spec: &str) -> Result<ComplexMatrix> {
    if spec.is_empty() {
        return Err(Error::InvalidSpec("empty Pauli string".into()));
    }
    let mut out = ComplexMatrix::identity(1);
    for ch in spec.chars() {
        let factor = match ch.to_ascii_uppercase() {
            'I' => ComplexMatrix::identity(2),
            'X' => ComplexMatrix::pauli(Axis::X),
            'Y' => ComplexMatrix::pauli(Axis::Y),
            'Z' => ComplexMatrix::pauli(Axis::Z),
            other => {
                return Err(Error::InvalidSpec(alloc::format!(
                    "unknown Pauli letter {other:?}"
                )))
            }
        };
        out = kron(&out, &factor)?;
    }
    Ok(out)
}

/// Diagonal unitary `diag(e^{iφ_1}, …)`.
pub fn diag_phase(phases: &[f64]) -> ComplexMatrix {
    let diag: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
    ComplexMatrix::from_diagonal(&diag)
}
