//! Dense complex matrices as JSON: `{"dim": d, "re": [...], "im": [...]}`,
//! both arrays row-major of length `d²`.

use std::fs;
use std::path::Path;

use dqc1_core::numerics::ComplexMatrix;
use dqc1_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("matrix file: {e}")))?;
    let len = file.dim * file.dim;
    if file.dim == 0 || file.re.len() != len || file.im.len() != len {
        return Err(CliError::Validation(format!(
            "matrix file: dim {} needs {len} entries in re and im, found {} and {}",
            file.dim,
            file.re.len(),
            file.im.len()
        )));
    }
    let entries: Vec<C64> = file.re.iter().zip(&file.im).map(|(&r, &i)| C64::new(r, i)).collect();
    ComplexMatrix::from_row_major(file.dim, &entries).map_err(|e| CliError::core("matrix file", e))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text).map_err(|e| match e {
        CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let entries = m.to_row_major();
    let file = MatrixFile {
        dim: m.dim(),
        re: entries.iter().map(|z| z.re).collect(),
        im: entries.iter().map(|z| z.im).collect(),
    };
    serde_json::to_string(&file).expect("finite floats serialize")
}

pub fn write_matrix(m: &ComplexMatrix, path: &Path) -> Result<()> {
    fs::write(path, matrix_to_json(m)).map_err(|e| CliError::io(path, e))
}
