//! Experiment configuration files (JSON).

use std::path::{Path, PathBuf};

use dqc1_core::circuit::ControlQubit;
use dqc1_core::tol::MAX_QUBITS;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::spec::{RhoSpec, UnitarySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TraceVsShots,
    EntpowerVsAlpha,
    ComplexityCurve,
    VerifyTheorem1,
    VerifyTheorem2,
    VerifyTheorem3,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Self::TraceVsShots => "trace-vs-shots",
            Self::EntpowerVsAlpha => "entpower-vs-alpha",
            Self::ComplexityCurve => "complexity-curve",
            Self::VerifyTheorem1 => "verify-theorem1",
            Self::VerifyTheorem2 => "verify-theorem2",
            Self::VerifyTheorem3 => "verify-theorem3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    /// Polarization of the control; exclusive with `bloch`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(default = "default_unitary")]
    pub unitary: String,
    #[serde(default = "default_rho")]
    pub rho: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shots: Vec<u64>,
    /// Random ensembles per point, or repetitions per shot count for `trace-vs-shots`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<f64>,
    /// Ensemble cardinality for register decompositions; defaults to `2·2^n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_pe")]
    pub pe: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Worker threads; all available when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_unitary() -> String {
    "haar".into()
}

fn default_rho() -> String {
    "maximally-mixed".into()
}

fn default_eps() -> f64 {
    0.05
}

fn default_pe() -> f64 {
    0.05
}

/// Parse and validate a JSON config. Unknown keys are rejected.
pub fn parse_config(text: &[u8]) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_slice(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = parse_config(&bytes)?;
    let base = path.parent().unwrap_or(Path::new("."));
    cfg.resolve_paths(base);
    cfg.unitary_spec()?;
    cfg.rho_spec()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, n: usize) -> Self {
        Self {
            experiment,
            n,
            alpha: None,
            bloch: None,
            unitary: default_unitary(),
            rho: default_rho(),
            shots: Vec::new(),
            samples: None,
            alphas: Vec::new(),
            k: None,
            eps: default_eps(),
            pe: default_pe(),
            seed: 0,
            output: None,
            format: Format::Csv,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Validation(msg));
        if self.n == 0 || self.n > MAX_QUBITS {
            return bad(format!("n = {} is outside 1..={MAX_QUBITS}", self.n));
        }
        if self.alpha.is_some() && self.bloch.is_some() {
            return bad("alpha and bloch are mutually exclusive".into());
        }
        self.control()?;
        for &a in &self.alphas {
            if !(0.0..=1.0).contains(&a) {
                return bad(format!("alphas: {a} is outside [0, 1]"));
            }
        }
        if self.shots.contains(&0) {
            return bad("shots: counts must be positive".into());
        }
        if self.samples == Some(0) {
            return bad("samples must be at least 1".into());
        }
        if let Some(k) = self.k {
            if k < 1 << self.n {
                return bad(format!("k = {k} is below 2^n = {}", 1 << self.n));
            }
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps = {} must be positive", self.eps));
        }
        if !(self.pe > 0.0 && self.pe < 1.0) {
            return bad(format!("pe = {} must lie in (0, 1)", self.pe));
        }
        self.unitary_spec()?;
        let rho = self.rho_spec()?;
        match self.experiment {
            Experiment::TraceVsShots if self.shots.is_empty() => bad("trace-vs-shots needs a nonempty shots grid".into()),
            Experiment::EntpowerVsAlpha | Experiment::ComplexityCurve | Experiment::VerifyTheorem2
                if self.alpha_grid().is_empty() =>
            {
                bad(format!("{} needs a nonempty alphas grid", self.experiment.id()))
            }
            Experiment::EntpowerVsAlpha | Experiment::VerifyTheorem1 | Experiment::VerifyTheorem2
                if rho != RhoSpec::MaximallyMixed =>
            {
                bad(format!("{} uses the maximally mixed register", self.experiment.id()))
            }
            Experiment::VerifyTheorem1 if self.alpha.is_some_and(|a| a != 1.0) || self.bloch.is_some() => {
                bad("verify-theorem1 uses the clean control (alpha = 1)".into())
            }
            Experiment::EntpowerVsAlpha | Experiment::VerifyTheorem2 | Experiment::ComplexityCurve
                if self.bloch.is_some() =>
            {
                bad(format!("{} sweeps alpha; bloch is not accepted", self.experiment.id()))
            }
            _ => Ok(()),
        }
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if let Ok(spec) = self.unitary.parse::<UnitarySpec>() {
            self.unitary = spec.resolve(base).to_string();
        }
        if let Ok(spec) = self.rho.parse::<RhoSpec>() {
            self.rho = spec.resolve(base).to_string();
        }
    }

    pub fn unitary_spec(&self) -> Result<UnitarySpec> {
        self.unitary.parse()
    }

    pub fn rho_spec(&self) -> Result<RhoSpec> {
        self.rho.parse()
    }

    /// Control from `alpha` or `bloch`; the clean control when neither is set.
    pub fn control(&self) -> Result<ControlQubit> {
        let r = match (self.alpha, self.bloch) {
            (Some(a), _) => ControlQubit::alpha(a),
            (_, Some(p)) => ControlQubit::bloch(p),
            _ => Ok(ControlQubit::pure_zero()),
        };
        r.map_err(|e| CliError::Validation(format!("control: {e}")))
    }

    /// `alphas`, or `[alpha]` when only a single polarization is given.
    pub fn alpha_grid(&self) -> Vec<f64> {
        if !self.alphas.is_empty() {
            self.alphas.clone()
        } else {
            self.alpha.into_iter().collect()
        }
    }

    pub fn samples_or_default(&self) -> usize {
        self.samples.unwrap_or(match self.experiment {
            Experiment::TraceVsShots => 1,
            _ => 100,
        })
    }

    pub fn k_or_default(&self) -> usize {
        self.k.unwrap_or(2 << self.n)
    }
}
