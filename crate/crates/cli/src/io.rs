//! Matrix file format: a JSON document with explicit shape and row-major
//! nested data. Serialization uses shortest round-trip decimals, so every
//! value re-parses bit-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use ncup_core::{CovarianceMatrix, RMat, SkewForm};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<f64>>,
}

impl MatrixDocument {
    pub fn from_mat(m: &RMat) -> Self {
        let n = m.dim();
        let data = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j)).collect())
            .collect();
        Self { rows: n, cols: n, data }
    }

    fn validate(&self, field: &str) -> Result<(), String> {
        if self.rows == 0 || self.cols == 0 {
            return Err(format!("{field}: rows and cols must be positive"));
        }
        if self.rows != self.cols {
            return Err(format!(
                "{field}: rows ({}) must equal cols ({}) for this command",
                self.rows, self.cols
            ));
        }
        if self.data.len() != self.rows {
            return Err(format!(
                "{field}: data has {} rows, expected rows = {}",
                self.data.len(),
                self.rows
            ));
        }
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(format!(
                    "{field}: data[{i}] has {} entries, expected cols = {}",
                    row.len(),
                    self.cols
                ));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(format!("{field}: data[{i}][{j}] = {v} is not finite"));
                }
            }
        }
        Ok(())
    }

    pub fn to_mat(&self, field: &str) -> Result<RMat, String> {
        self.validate(field)?;
        let flat: Vec<f64> = self.data.iter().flatten().copied().collect();
        Ok(RMat::from_rows(self.rows, &flat))
    }
}

pub fn load_matrix(path: &Path, field: &str) -> Result<RMat, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("{field}: cannot read {}: {e}", path.display()))?;
    let doc: MatrixDocument = serde_json::from_str(&text)
        .map_err(|e| format!("{field}: {} is not a valid matrix document: {e}", path.display()))?;
    doc.to_mat(field)
}

pub fn load_covariance(path: &Path, field: &str) -> Result<CovarianceMatrix, String> {
    let mat = load_matrix(path, field)?;
    CovarianceMatrix::new(mat).map_err(|e| format!("{field}: {e}"))
}

pub fn load_skew(path: &Path, field: &str) -> Result<SkewForm, String> {
    let mat = load_matrix(path, field)?;
    SkewForm::new(mat).map_err(|e| format!("{field}: {e}"))
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| format!("cannot serialize output: {e}"))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
