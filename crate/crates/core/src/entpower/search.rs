use alloc::vec::Vec;

use super::{analytic_minimizer, branch_coefficients, decompose_from_t, ensemble_average, fourier_ensemble, mixing_factor, support_rank};
use crate::circuit::{ControlQubit, Dqc1Instance};
use crate::numerics::{random_right_unitary, SeededRng};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub samples: usize,
    /// Ensemble cardinality `K`.
    pub k: usize,
    /// Add the Fourier ensemble to the candidates when the register is maximally mixed.
    pub include_fourier: bool,
}

impl SearchOptions {
    /// `K = 2·2^n`, Fourier candidate included.
    pub fn for_register(n: usize, samples: usize) -> Self {
        Self {
            samples,
            k: 2 << n,
            include_fourier: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntpowerSearch {
    /// Largest average over every candidate.
    pub best: f64,
    /// Value of the Fourier ensemble, when it was a candidate.
    pub fourier: Option<f64>,
    /// Average for each sampled ensemble, in sample order.
    pub sampled: Vec<f64>,
}

impl EntpowerSearch {
    pub fn best_sampled(&self) -> Option<f64> {
        self.sampled.iter().copied().reduce(f64::max)
    }
}

/// Largest [`ensemble_average`] over `samples` random decompositions of the register state.
pub fn brute_force_entpower(inst: &Dqc1Instance, samples: usize, k: usize, rng: &SeededRng) -> Result<f64> {
    let opts = SearchOptions {
        samples,
        k,
        include_fourier: true,
    };
    Ok(brute_force_entpower_with(inst, opts, rng)?.best)
}

/// Sample `s` draws its right unitary from `rng.fork(s)`.
pub fn brute_force_entpower_with(inst: &Dqc1Instance, opts: SearchOptions, rng: &SeededRng) -> Result<EntpowerSearch> {
    if opts.samples == 0 && !opts.include_fourier {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: 0.0,
            reason: "need at least one sample",
        });
    }
    let rho = inst.system_state();
    let rank = support_rank(rho)?;
    if opts.k < rank {
        return Err(Error::InvalidParameter {
            name: "K",
            value: opts.k as f64,
            reason: "ensemble cardinality must be at least the rank of the register state",
        });
    }
    let fourier = if opts.include_fourier && inst.has_maximally_mixed_register(tol::SPECTRAL) {
        Some(ensemble_average(inst, &fourier_ensemble(inst.unitary())?)?)
    } else {
        None
    };
    let mut sampled = Vec::with_capacity(opts.samples);
    for s in 0..opts.samples {
        let mut stream = rng.fork(s as u64);
        let t = random_right_unitary(rank, opts.k, &mut stream)?;
        sampled.push(ensemble_average(inst, &decompose_from_t(rho, &t)?)?);
    }
    let best = sampled
        .iter()
        .copied()
        .chain(fourier)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EntpowerSearch { best, fourier, sampled })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingSearch {
    /// Smallest mixing factor over every candidate.
    pub best: f64,
    /// Mixing factor of [`analytic_minimizer`].
    pub analytic: f64,
    /// Smallest mixing factor among the random candidates.
    pub best_sampled: f64,
}

/// Smallest mixing factor over `samples` random `2 × K` decompositions of the
/// control state and the analytic minimizer.
pub fn brute_force_min_mixing(control: &ControlQubit, samples: usize, k: usize, rng: &SeededRng) -> Result<f64> {
    Ok(brute_force_min_mixing_with(control, samples, k, rng)?.best)
}

pub fn brute_force_min_mixing_with(
    control: &ControlQubit,
    samples: usize,
    k: usize,
    rng: &SeededRng,
) -> Result<MixingSearch> {
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: 0.0,
            reason: "need at least one sample",
        });
    }
    if k < 2 {
        return Err(Error::InvalidParameter {
            name: "K",
            value: k as f64,
            reason: "control decompositions need K >= 2",
        });
    }
    let analytic = mixing_factor(&branch_coefficients(control, &analytic_minimizer(control))?);
    let mut best_sampled = f64::INFINITY;
    for s in 0..samples {
        let mut stream = rng.fork(s as u64);
        let t = random_right_unitary(2, k, &mut stream)?;
        best_sampled = best_sampled.min(mixing_factor(&branch_coefficients(control, &t)?));
    }
    Ok(MixingSearch {
        best: analytic.min(best_sampled),
        analytic,
        best_sampled,
    })
}
