//! Control-qubit measurements, shot-based trace estimation and the
//! measurement-complexity model.
//!
//! After the circuit the control qubit carries `ρ_f[0][1] = c·conj(t)` with
//! `t = Tr(U ρ_n)` and `c = (P₃ + iP₂)/2` the coherence the Hadamard puts on
//! the control. For the polarized control this gives `⟨σ_x⟩ = α Re t` and
//! `⟨σ_y⟩ = +α Im t`; [`estimate_trace`] inverts exactly that relation.

use rand_distr::{Binomial, Distribution};

use crate::circuit::{general_final_control, Dqc1Instance};
use crate::numerics::{Axis, ComplexMatrix, SeededRng};
use crate::{tol, Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Monte Carlo estimate of `Tr(U ρ_n)` from `σ_x` and `σ_y` shots on the control.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEstimate {
    pub n: usize,
    /// Magnitude of the control coherence `|P₃ + iP₂|`; equals α for a polarized control.
    pub alpha: f64,
    pub shots_x: u64,
    pub shots_y: u64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub stderr_x: f64,
    pub stderr_y: f64,
    pub trace_estimate: C64,
}

impl TraceEstimate {
    /// Standard errors of the real and imaginary parts of `trace_estimate`.
    pub fn trace_stderr(&self) -> (f64, f64) {
        (self.stderr_x / self.alpha, self.stderr_y / self.alpha)
    }
}

/// `Tr(ρ σ_axis)` for a single-qubit state.
pub fn expect_pauli(rho_f: &ComplexMatrix, axis: Axis) -> Result<f64> {
    if rho_f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho_f.dim(),
        });
    }
    Ok((rho_f * &ComplexMatrix::pauli(axis)).trace().re)
}

/// Number of `+1` outcomes among `shots` measurements with `P(+1) = p`.
pub fn sample_shots(p: f64, shots: u64, rng: &mut SeededRng) -> Result<u64> {
    if !(-tol::CONSTRUCTION..=1.0 + tol::CONSTRUCTION).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "outcome probability must lie in [0, 1]",
        });
    }
    let binomial = Binomial::new(shots, p.clamp(0.0, 1.0)).map_err(|_| Error::InvalidParameter {
        name: "p",
        value: p,
        reason: "rejected by the binomial sampler",
    })?;
    Ok(binomial.sample(rng))
}

fn shot_statistics(expectation: f64, shots: u64, rng: &mut SeededRng) -> Result<(f64, f64)> {
    let ups = sample_shots(0.5 * (1.0 + expectation), shots, rng)?;
    let l = shots as f64;
    let mean = (2.0 * ups as f64 - l) / l;
    let stderr = if shots > 1 {
        let variance = (1.0 - mean * mean).max(0.0) * l / (l - 1.0);
        (variance / l).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

/// Estimates `Tr(U ρ_n)` (the normalized trace for the maximally mixed
/// register) with `shots` rounds per Pauli axis.
///
/// The `σ_x` batch is drawn before the `σ_y` batch from the same generator.
pub fn estimate_trace(inst: &Dqc1Instance, shots: u64, rng: &mut SeededRng) -> Result<TraceEstimate> {
    if shots == 0 {
        return Err(Error::InvalidParameter {
            name: "shots",
            value: 0.0,
            reason: "at least one shot per axis is required",
        });
    }
    let p = inst.control().bloch_vector();
    let coherence = C64::new(p[2], p[1]);
    if coherence.norm() <= tol::CONSTRUCTION {
        return Err(Error::NoInformation);
    }
    let rho_f = general_final_control(inst.control(), inst.system_state(), inst.unitary())?;
    let (mean_x, stderr_x) = shot_statistics(expect_pauli(&rho_f, Axis::X)?, shots, rng)?;
    let (mean_y, stderr_y) = shot_statistics(expect_pauli(&rho_f, Axis::Y)?, shots, rng)?;
    // ρ_f[0][1] = (⟨σ_x⟩ − i⟨σ_y⟩)/2 = (coherence/2)·conj(t)
    let trace_estimate = (C64::new(mean_x, -mean_y) / coherence).conj();
    Ok(TraceEstimate {
        n: inst.n(),
        alpha: coherence.norm(),
        shots_x: shots,
        shots_y: shots,
        mean_x,
        mean_y,
        stderr_x,
        stderr_y,
        trace_estimate,
    })
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in (0, 1)",
        })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1]",
        })
    }
}

/// Rounds `ln(1/P_e)/(α² ε²)` needed to estimate one quadrature to
/// absolute accuracy `ε` with failure probability `P_e`.
pub fn rounds_required(eps: f64, pe: f64, alpha: f64) -> Result<f64> {
    check_positive("eps", eps)?;
    check_probability("pe", pe)?;
    check_alpha(alpha)?;
    Ok((1.0 / pe).ln() / (alpha * alpha * eps * eps))
}

/// `|ε / X|` as a fraction.
pub fn relative_error(eps: f64, true_value: f64) -> Result<f64> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must be nonnegative",
        });
    }
    if true_value == 0.0 {
        return Err(Error::UndefinedRelativeError);
    }
    Ok((eps / true_value).abs())
}

/// Relative-error targets and failure probabilities for the two quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub eps_x: f64,
    pub eps_y: f64,
    pub pe_x: f64,
    pub pe_y: f64,
}

impl ErrorBudget {
    /// `ln(1/P_e)/ε²` for the `σ_x` axis.
    pub fn term_x(&self) -> f64 {
        (1.0 / self.pe_x).ln() / (self.eps_x * self.eps_x)
    }

    /// `ln(1/P_e)/ε²` for the `σ_y` axis.
    pub fn term_y(&self) -> f64 {
        (1.0 / self.pe_y).ln() / (self.eps_y * self.eps_y)
    }

    /// `M = term_x + term_y`.
    pub fn m(&self) -> f64 {
        self.term_x() + self.term_y()
    }
}

pub fn error_budget(eps_x: f64, eps_y: f64, pe_x: f64, pe_y: f64) -> Result<ErrorBudget> {
    check_positive("eps_x", eps_x)?;
    check_positive("eps_y", eps_y)?;
    check_probability("pe_x", pe_x)?;
    check_probability("pe_y", pe_y)?;
    Ok(ErrorBudget {
        eps_x,
        eps_y,
        pe_x,
        pe_y,
    })
}

/// Rounds needed to meet an [`ErrorBudget`] for a given normalized trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundsPlan {
    /// The larger of the per-axis requirements.
    pub rounds: f64,
    /// `None` when `Re t = 0` and the `σ_x` relative error is undefined.
    pub rounds_x: Option<f64>,
    /// `None` when `Im t = 0` and the `σ_y` relative error is undefined.
    pub rounds_y: Option<f64>,
    /// Whether the retained axes ask for the same number of rounds.
    pub consistent: bool,
    /// `M` restricted to the retained axes.
    pub budget_m: f64,
}

/// Solves `α² L = ln(1/P_e)/|ε Re t|² = ln(1/P_e)/|ε Im t|²` for `L`.
///
/// An axis whose quadrature is exactly zero is dropped. When the two axes
/// disagree the larger requirement is returned and `consistent` is false.
pub fn rounds_for_budget(budget: &ErrorBudget, alpha: f64, t: C64) -> Result<RoundsPlan> {
    check_alpha(alpha)?;
    let a2 = alpha * alpha;
    let rounds_x = (t.re != 0.0).then(|| budget.term_x() / (a2 * t.re * t.re));
    let rounds_y = (t.im != 0.0).then(|| budget.term_y() / (a2 * t.im * t.im));
    let (rounds, consistent) = match (rounds_x, rounds_y) {
        (None, None) => return Err(Error::EmptyBudget),
        (Some(x), None) => (x, true),
        (None, Some(y)) => (y, true),
        (Some(x), Some(y)) => (x.max(y), (x - y).abs() <= tol::THEOREM * x.max(y)),
    };
    let budget_m = rounds_x.map_or(0.0, |_| budget.term_x()) + rounds_y.map_or(0.0, |_| budget.term_y());
    Ok(RoundsPlan {
        rounds,
        rounds_x,
        rounds_y,
        consistent,
        budget_m,
    })
}

/// `√(α² − M/L)`; radicands within `1e-12` below zero clamp to zero.
pub fn entpower_from_rounds(alpha: f64, m: f64, rounds: f64) -> Result<f64> {
    check_positive("rounds", rounds)?;
    let radicand = alpha * alpha - m / rounds;
    if radicand < -tol::CONSTRUCTION {
        return Err(Error::InconsistentBudget { radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Total cost `n · L`.
pub fn total_complexity(n: usize, rounds: f64) -> f64 {
    n as f64 * rounds
}
