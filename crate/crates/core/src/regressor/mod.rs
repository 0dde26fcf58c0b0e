//! Epsilon-SVR with an RBF kernel: standardization, an SMO dual solver,
//! model persistence and training-RMSE grid search.

mod grid;
mod scaler;
mod smo;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use self::grid::{default_grid, grid_search, GridPoint, GridSearch};
pub use self::scaler::Scaler;
pub use self::smo::TRACE_EVERY;

use self::scaler::check_rows;
use self::smo::{solve, DualSolution, Problem};
use crate::error::{Error, Result};
use crate::stats::rmse;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub c: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

impl Hyperparams {
    pub fn new(c: f64, epsilon: f64, gamma: f64) -> Result<Self> {
        let hp = Self { c, epsilon, gamma };
        hp.validate()?;
        Ok(hp)
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidInput(format!("C must be positive, got {}", self.c)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Stopping rule and tie-breaking seed for the SMO solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Largest allowed KKT violation at termination.
    pub tol: f64,
    /// Cap on pair updates.
    pub max_iter: usize,
    /// Seeds the scan order used to break ties in working-set selection.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_iter: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub iterations: usize,
    /// Dual objective (maximization form) at termination.
    pub dual_objective: f64,
    pub kkt_violation: f64,
    pub train_rmse: f64,
    pub converged: bool,
    /// Dual objective after every [`TRACE_EVERY`] updates.
    pub objective_trace: Vec<f64>,
}

/// A trained regressor. Support vectors are stored standardized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    pub version: u32,
    pub hyperparams: Hyperparams,
    pub scaler: Scaler,
    pub support_vectors: Vec<Vec<f64>>,
    pub dual_coeffs: Vec<f64>,
    pub bias: f64,
}

pub fn rbf(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(kernel(x, y, gamma))
}

fn kernel(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

pub(crate) fn gram(rows: &[Vec<f64>], gamma: f64) -> Vec<f64> {
    let n = rows.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
        for j in 0..i {
            let v = kernel(&rows[i], &rows[j], gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

fn check_targets(rows: &[Vec<f64>], targets: &[f64]) -> Result<()> {
    if rows.len() < 2 {
        return Err(Error::TooSmall {
            what: "training rows",
            min: 2,
            got: rows.len(),
        });
    }
    check_rows(rows)?;
    if targets.len() != rows.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: targets.len(),
        });
    }
    if targets.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("training targets".into()));
    }
    Ok(())
}

/// Builds the model and report from a dual solution on standardized rows.
fn finish(
    scaled: &[Vec<f64>],
    targets: &[f64],
    hyperparams: Hyperparams,
    scaler: Scaler,
    sol: DualSolution,
) -> (SvrModel, TrainReport) {
    let (support_vectors, dual_coeffs) = scaled
        .iter()
        .zip(&sol.beta)
        .filter(|(_, &b)| b != 0.0)
        .map(|(r, &b)| (r.clone(), b))
        .unzip();
    let model = SvrModel {
        version: MODEL_FORMAT_VERSION,
        hyperparams,
        scaler,
        support_vectors,
        dual_coeffs,
        bias: sol.bias,
    };
    let fitted: Vec<f64> = scaled.iter().map(|z| model.decision(z)).collect();
    let report = TrainReport {
        iterations: sol.iterations,
        dual_objective: sol.objective,
        kkt_violation: sol.kkt_violation,
        train_rmse: rmse(&fitted, targets),
        converged: sol.converged,
        objective_trace: sol.trace,
    };
    (model, report)
}

/// Trains on raw feature rows. A run that hits `max_iter` still returns a
/// model, with `converged = false` in the report.
pub fn train(
    rows: &[Vec<f64>],
    targets: &[f64],
    hyperparams: Hyperparams,
    config: &SolverConfig,
) -> Result<(SvrModel, TrainReport)> {
    hyperparams.validate()?;
    check_targets(rows, targets)?;
    let scaler = Scaler::fit(rows)?;
    let scaled = scaler.apply_all(rows)?;
    let k = gram(&scaled, hyperparams.gamma);
    let sol = solve(
        &Problem {
            gram: &k,
            targets,
            c: hyperparams.c,
            epsilon: hyperparams.epsilon,
        },
        config.tol,
        config.max_iter,
        config.seed,
    );
    Ok(finish(&scaled, targets, hyperparams, scaler, sol))
}

impl SvrModel {
    /// Decision value for an already standardized row.
    fn decision(&self, z: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coeffs)
            .map(|(sv, b)| b * kernel(sv, z, self.hyperparams.gamma))
            .sum::<f64>()
            + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(self.decision(&self.scaler.apply(x)?))
    }

    pub fn predict_batch(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter().map(|r| self.predict(r)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(s)?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported model version {}",
                model.version
            )));
        }
        if model.support_vectors.len() != model.dual_coeffs.len()
            || model.support_vectors.iter().any(|sv| sv.len() != model.scaler.dim())
        {
            return Err(Error::InvalidInput("inconsistent model dimensions".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
