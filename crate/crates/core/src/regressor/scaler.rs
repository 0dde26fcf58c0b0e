use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{pooled_mean, pooled_std_dev};

/// Per-dimension z-scoring fitted on training rows. Dimensions with zero
/// spread are passed through unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Scaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooSmall {
                what: "rows to standardize",
                min: 2,
                got: rows.len(),
            });
        }
        let d = check_rows(rows)?;
        let (mut mean, mut std) = (Vec::with_capacity(d), Vec::with_capacity(d));
        for k in 0..d {
            let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            mean.push(pooled_mean(&col));
            std.push(pooled_std_dev(&col));
        }
        Ok(Self { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Indices of the dimensions left unscaled.
    pub fn passthrough(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.std[k] <= 0.0).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { v })
            .collect())
    }

    pub fn apply_all(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.apply(r)).collect()
    }
}

/// Checks that `rows` is a non-empty, rectangular, finite matrix and returns
/// its width.
pub(crate) fn check_rows(rows: &[Vec<f64>]) -> Result<usize> {
    let d = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("empty matrix".into()))?;
    for r in rows {
        if r.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.len(),
            });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature matrix".into()));
        }
    }
    Ok(d)
}
