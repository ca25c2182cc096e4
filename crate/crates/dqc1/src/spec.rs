//! Text specs for the unitary and the register state.
//!
//! Unitary: `haar | identity | pauli:<[IXYZ]+> | diag-phase:<comma-floats> | file:<path>`.
//! Register: `maximally-mixed | random | random:<rank> | file:<path>`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dqc1_core::circuit::{diag_phase, pauli_string};
use dqc1_core::numerics::{haar_unitary, random_density, ComplexMatrix, SeededRng};
use dqc1_core::tol;

use crate::error::{CliError, Result};
use crate::matrix_io::read_matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySpec {
    Haar,
    Identity,
    Pauli(String),
    DiagPhase(Vec<f64>),
    File(PathBuf),
}

impl FromStr for UnitarySpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Validation(format!("unitary spec {s:?}: {why}"));
        match s.split_once(':') {
            None if s == "haar" => Ok(Self::Haar),
            None if s == "identity" => Ok(Self::Identity),
            Some(("pauli", letters)) => {
                if letters.is_empty() || !letters.chars().all(|c| "IXYZ".contains(c)) {
                    return Err(bad("expected letters from IXYZ"));
                }
                Ok(Self::Pauli(letters.to_owned()))
            }
            Some(("diag-phase", list)) => list
                .split(',')
                .map(|x| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<Vec<_>>>()
                .map(Self::DiagPhase)
                .ok_or_else(|| bad("expected comma-separated finite numbers")),
            Some(("file", path)) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
            _ => Err(bad("expected haar, identity, pauli:<IXYZ>, diag-phase:<list> or file:<path>")),
        }
    }
}

impl fmt::Display for UnitarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Haar => write!(f, "haar"),
            Self::Identity => write!(f, "identity"),
            Self::Pauli(s) => write!(f, "pauli:{s}"),
            Self::DiagPhase(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "diag-phase:{}", parts.join(","))
            }
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl UnitarySpec {
    /// Relative file paths are taken relative to `base`.
    pub fn resolve(self, base: &Path) -> Self {
        match self {
            Self::File(p) if p.is_relative() => Self::File(base.join(p)),
            other => other,
        }
    }

    /// Build the `2^n × 2^n` unitary; only `haar` draws from `rng`.
    pub fn build(&self, n: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
        let dim = 1usize << n;
        let u = match self {
            Self::Haar => haar_unitary(dim, rng),
            Self::Identity => ComplexMatrix::identity(dim),
            Self::Pauli(letters) => {
                if letters.len() != n {
                    return Err(CliError::Validation(format!(
                        "pauli:{letters} has {} factors but n = {n}",
                        letters.len()
                    )));
                }
                pauli_string(letters).map_err(|e| CliError::core("unitary", e))?
            }
            Self::DiagPhase(phases) => {
                if phases.len() != dim {
                    return Err(CliError::Validation(format!(
                        "diag-phase needs {dim} phases for n = {n}, found {}",
                        phases.len()
                    )));
                }
                diag_phase(phases)
            }
            Self::File(path) => {
                let m = read_matrix(path)?;
                if m.dim() != dim {
                    return Err(CliError::Validation(format!(
                        "{}: dimension {} does not match n = {n}",
                        path.display(),
                        m.dim()
                    )));
                }
                m
            }
        };
        u.check_unitary(tol::SPECTRAL).map_err(|e| CliError::core("unitary", e))?;
        Ok(u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RhoSpec {
    MaximallyMixed,
    /// Random density matrix of the given rank; full rank when `None`.
    Random(Option<usize>),
    File(PathBuf),
}

impl FromStr for RhoSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Validation(format!("rho spec {s:?}: {why}"));
        match s.split_once(':') {
            None if s == "maximally-mixed" => Ok(Self::MaximallyMixed),
            None if s == "random" => Ok(Self::Random(None)),
            Some(("random", rank)) => rank
                .parse::<usize>()
                .ok()
                .filter(|&r| r > 0)
                .map(|r| Self::Random(Some(r)))
                .ok_or_else(|| bad("rank must be a positive integer")),
            Some(("file", path)) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
            _ => Err(bad("expected maximally-mixed, random, random:<rank> or file:<path>")),
        }
    }
}

impl fmt::Display for RhoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MaximallyMixed => write!(f, "maximally-mixed"),
            Self::Random(None) => write!(f, "random"),
            Self::Random(Some(r)) => write!(f, "random:{r}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl RhoSpec {
    pub fn resolve(self, base: &Path) -> Self {
        match self {
            Self::File(p) if p.is_relative() => Self::File(base.join(p)),
            other => other,
        }
    }

    pub fn build(&self, n: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
        let dim = 1usize << n;
        let rho = match self {
            Self::MaximallyMixed => ComplexMatrix::maximally_mixed(dim),
            Self::Random(rank) => {
                random_density(dim, rank.unwrap_or(dim), rng).map_err(|e| CliError::core("rho", e))?
            }
            Self::File(path) => {
                let m = read_matrix(path)?;
                if m.dim() != dim {
                    return Err(CliError::Validation(format!(
                        "{}: dimension {} does not match n = {n}",
                        path.display(),
                        m.dim()
                    )));
                }
                m
            }
        };
        rho.check_density(tol::SPECTRAL).map_err(|e| CliError::core("rho", e))?;
        Ok(rho)
    }
}
