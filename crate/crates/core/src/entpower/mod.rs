//! Entangling power of the circuit across the control | register cut.
//!
//! The entanglement of a pure joint state is `E = √(2(1 − Tr ρ_r²))` with `ρ_r`
//! either reduced state; mixed states use the convex roof. The entangling power
//! maximizes the average entanglement over pure-state decompositions of the
//! register input.

mod control;
mod ensemble;
mod search;

pub use control::{
    analytic_minimizer, branch_coefficients, control_eigendecomposition, lambda_factor, mixing_factor,
    BranchCoefficients,
};
pub use ensemble::{decompose_from_t, fourier_ensemble, support_rank, PureEnsemble, SUPPORT_CUTOFF};
pub use search::{
    brute_force_entpower, brute_force_entpower_with, brute_force_min_mixing, brute_force_min_mixing_with,
    EntpowerSearch, MixingSearch, SearchOptions,
};

use crate::circuit::{normalized_trace, ControlQubit, Dqc1Instance};
use crate::numerics::{
    check_normalized, reduced_from_vector, trace_sqrt_product, ComplexMatrix, RightUnitary, StateVector, Subsystem,
};
use crate::{tol, Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// `√(2(1 − Tr ρ_c²))` for a unit vector on `C² ⊗ C^d`.
pub fn pure_entanglement(psi: &StateVector) -> Result<f64> {
    check_normalized(psi, tol::SPECTRAL)?;
    if psi.len() < 2 || !psi.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: 2 * (psi.len() / 2).max(1),
            found: psi.len(),
        });
    }
    let reduced = reduced_from_vector(psi, Subsystem::Control, psi.len() / 2);
    // normalize so a unit vector within tolerance still gives Tr ρ = 1
    let norm2 = reduced.trace().re;
    let purity = reduced.purity() / (norm2 * norm2);
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt().min(1.0))
}

/// `√(1 − |Tr U / 2^n|²)`.
pub fn entpower_standard(u: &ComplexMatrix) -> f64 {
    (1.0 - normalized_trace(u).norm_sqr()).max(0.0).sqrt()
}

/// `α √(1 − |Tr U / 2^n|²)`.
pub fn entpower_alpha(u: &ComplexMatrix, alpha: f64) -> Result<f64> {
    ControlQubit::alpha(alpha)?;
    Ok(alpha * entpower_standard(u))
}

/// `lambda_factor(control) · base`.
pub fn entpower_general_scaled(control: &ControlQubit, base: f64) -> Result<f64> {
    if !(-tol::THEOREM..=1.0 + tol::THEOREM).contains(&base) {
        return Err(Error::InvalidParameter {
            name: "base",
            value: base,
            reason: "entangling power must lie in [0, 1]",
        });
    }
    Ok(lambda_factor(control) * base)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntpowerBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Lower bound `1 − Tr√(Uρ U† ρ)` and upper bound `√(1 − |Tr Uρ|²)` on the
/// entangling power with a clean control and register state `ρ`.
pub fn entpower_bounds(u: &ComplexMatrix, rho_n: &ComplexMatrix) -> Result<EntpowerBounds> {
    let fidelity = trace_sqrt_product(u, rho_n)?;
    let t = (u * rho_n).trace();
    Ok(EntpowerBounds {
        lower: 1.0 - fidelity,
        upper: (1.0 - t.norm_sqr()).max(0.0).sqrt(),
    })
}

/// Average entanglement `Σ_i q_i E[ϱ_i]` of the branches produced by the
/// members of `ens`.
///
/// Each branch `ϱ_i` is the output for control `ρ_c` and register `|φ_i⟩`.
/// Its convex roof is evaluated over control decompositions, using the
/// analytic minimizer as the single candidate.
pub fn ensemble_average(inst: &Dqc1Instance, ens: &PureEnsemble) -> Result<f64> {
    let t = analytic_minimizer(inst.control());
    ensemble_average_with(inst, ens, core::slice::from_ref(&t))
}

/// As [`ensemble_average`], taking for every branch the smallest value over
/// the control decompositions `candidates` (each `2 × K`).
pub fn ensemble_average_with(inst: &Dqc1Instance, ens: &PureEnsemble, candidates: &[RightUnitary]) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter {
            name: "candidates",
            value: 0.0,
            reason: "need at least one control decomposition",
        });
    }
    ens.check_realizes(inst.system_state(), tol::SPECTRAL)?;
    let coefficients = candidates
        .iter()
        .map(|t| branch_coefficients(inst.control(), t))
        .collect::<Result<alloc::vec::Vec<_>>>()?;
    let u = inst.unitary();
    let mut total = 0.0;
    for (q, phi) in ens.iter() {
        let u_phi = u.apply(phi);
        let mut best = f64::INFINITY;
        for bc in &coefficients {
            let mut roof = 0.0;
            for j in 0..bc.len() {
                if let Some(gamma) = bc.branch_state(j, phi, &u_phi) {
                    roof += bc.rs[j] * pure_entanglement(&gamma)?;
                }
            }
            best = best.min(roof);
        }
        total += q * best;
    }
    Ok(total)
}
