use serde::{Deserialize, Serialize};

use super::smo::{solve, Problem};
use super::{check_targets, finish, gram, Hyperparams, Scaler, SolverConfig, SvrModel, TrainReport};
use crate::error::{Error, Result};

/// C in {1, 10, 100, 1000}, gamma in {2^-8, 2^-6, 2^-4, 2^-2, 2^0},
/// epsilon in {0.1, 1} (MOS units).
pub fn default_grid() -> Vec<Hyperparams> {
    let mut grid = Vec::with_capacity(40);
    for c in [1.0, 10.0, 100.0, 1000.0] {
        for e in [-8, -6, -4, -2, 0] {
            for epsilon in [0.1, 1.0] {
                grid.push(Hyperparams {
                    c,
                    epsilon,
                    gamma: 2f64.powi(e),
                });
            }
        }
    }
    grid
}

/// Outcome of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub hyperparams: Hyperparams,
    pub train_rmse: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSearch {
    pub hyperparams: Hyperparams,
    pub model: SvrModel,
    pub report: TrainReport,
    /// Every grid point, in evaluation order (ascending C, gamma, epsilon).
    pub points: Vec<GridPoint>,
}

/// Trains one model per grid point on all rows and keeps the converged one
/// with the lowest training RMSE. Ties go to smaller C, then smaller gamma,
/// then smaller epsilon.
pub fn grid_search(
    rows: &[Vec<f64>],
    targets: &[f64],
    grid: &[Hyperparams],
    config: &SolverConfig,
) -> Result<GridSearch> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty hyperparameter grid".into()));
    }
    for hp in grid {
        hp.validate()?;
    }
    check_targets(rows, targets)?;
    let scaler = Scaler::fit(rows)?;
    let scaled = scaler.apply_all(rows)?;

    let mut order = grid.to_vec();
    order.sort_by(|a, b| {
        a.c.total_cmp(&b.c)
            .then(a.gamma.total_cmp(&b.gamma))
            .then(a.epsilon.total_cmp(&b.epsilon))
    });

    let mut grams: Vec<(f64, Vec<f64>)> = Vec::new();
    for hp in &order {
        if !grams.iter().any(|(g, _)| *g == hp.gamma) {
            grams.push((hp.gamma, gram(&scaled, hp.gamma)));
        }
    }

    let mut points = Vec::with_capacity(order.len());
    let mut best: Option<(SvrModel, TrainReport)> = None;
    for hp in order {
        let k = &grams
            .iter()
            .find(|(g, _)| *g == hp.gamma)
            .expect("one gram per gamma")
            .1;
        let sol = solve(
            &Problem {
                gram: k,
                targets,
                c: hp.c,
                epsilon: hp.epsilon,
            },
            config.tol,
            config.max_iter,
            config.seed,
        );
        let (model, report) = finish(&scaled, targets, hp, scaler.clone(), sol);
        points.push(GridPoint {
            hyperparams: hp,
            train_rmse: report.train_rmse,
            converged: report.converged,
        });
        let better = report.converged && best.as_ref().is_none_or(|(_, r)| report.train_rmse < r.train_rmse);
        if better {
            best = Some((model, report));
        }
    }
    let (model, report) = best.ok_or(Error::NoConvergence)?;
    Ok(GridSearch {
        hyperparams: model.hyperparams,
        model,
        report,
        points,
    })
}
