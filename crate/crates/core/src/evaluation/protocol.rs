use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::manifest::DatasetManifest;
use super::metrics::{plcc, rmse, srcc};
use super::split::{content_split, derive_seed};
use crate::error::{Error, Result};
use crate::regressor::{default_grid, grid_search, Hyperparams, SolverConfig};
use crate::stats::{mean, median};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub repeats: usize,
    /// Training fraction of the sequences.
    pub ratio: f64,
    pub master_seed: u64,
    pub grid: Vec<Hyperparams>,
    pub solver: SolverConfig,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            repeats: 100,
            ratio: 0.8,
            master_seed: 0,
            grid: default_grid(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatResult {
    pub repeat: usize,
    pub seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    pub srcc: Option<f64>,
    pub plcc: Option<f64>,
    pub rmse: Option<f64>,
    pub hyperparams: Option<Hyperparams>,
    pub error: Option<String>,
}

impl RepeatResult {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// Mean and median of each metric over the successful repeats (`None`
/// when every repeat failed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub successes: usize,
    pub failures: usize,
    pub mean_srcc: Option<f64>,
    pub mean_plcc: Option<f64>,
    pub mean_rmse: Option<f64>,
    pub median_srcc: Option<f64>,
    pub median_plcc: Option<f64>,
    pub median_rmse: Option<f64>,
}

impl Aggregate {
    pub fn from_repeats(rows: &[RepeatResult]) -> Self {
        let ok: Vec<&RepeatResult> = rows.iter().filter(|r| r.succeeded()).collect();
        let col = |f: fn(&RepeatResult) -> Option<f64>| ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>();
        let (s, p, e) = (col(|r| r.srcc), col(|r| r.plcc), col(|r| r.rmse));
        let mean_of = |v: &[f64]| (!v.is_empty()).then(|| mean(v));
        let median_of = |v: &[f64]| (!v.is_empty()).then(|| median(v));
        Self {
            successes: ok.len(),
            failures: rows.len() - ok.len(),
            mean_srcc: mean_of(&s),
            mean_plcc: mean_of(&p),
            mean_rmse: mean_of(&e),
            median_srcc: median_of(&s),
            median_plcc: median_of(&p),
            median_rmse: median_of(&e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub version: u32,
    pub repeats: usize,
    pub ratio: f64,
    pub master_seed: u64,
    pub feature_dim: usize,
    pub per_repeat: Vec<RepeatResult>,
    pub aggregate: Aggregate,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s)?;
        if r.version != REPORT_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!("unsupported report version {}", r.version)));
        }
        Ok(r)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Repeated content-separated train/test evaluation.
///
/// Repeat `r` splits with `derive_seed(master_seed, r)`, grid-searches on
/// the training side and scores the held-out side. A failing repeat is
/// recorded with its error and left out of the aggregate.
pub fn run_protocol(
    manifest: &DatasetManifest,
    features: &HashMap<String, Vec<f64>>,
    config: &ProtocolConfig,
) -> Result<EvalReport> {
    if config.repeats == 0 {
        return Err(Error::InvalidInput("at least one repeat is needed".into()));
    }
    let mut dim = None;
    for e in manifest.entries() {
        let row = features
            .get(&e.id)
            .ok_or_else(|| Error::InvalidInput(format!("no features for `{}`", e.id)))?;
        let expected = *dim.get_or_insert(row.len());
        if row.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: row.len(),
            });
        }
    }
    let mos: HashMap<&str, f64> = manifest.entries().iter().map(|e| (e.id.as_str(), e.mos)).collect();
    let items = manifest.entries().iter().map(|e| (e.id.as_str(), e.group.as_str()));
    // Fail fast on manifests that can never be split.
    content_split(items.clone(), config.ratio, 0)?;

    let rows_for = |ids: &[String]| -> (Vec<Vec<f64>>, Vec<f64>) {
        ids.iter().map(|id| (features[id].clone(), mos[id.as_str()])).unzip()
    };

    let per_repeat = (0..config.repeats)
        .map(|r| {
            let seed = derive_seed(config.master_seed, r as u64);
            let split = content_split(items.clone(), config.ratio, seed).expect("manifest already splits");
            let mut row = RepeatResult {
                repeat: r,
                seed,
                train_size: split.train.len(),
                test_size: split.test.len(),
                srcc: None,
                plcc: None,
                rmse: None,
                hyperparams: None,
                error: None,
            };
            let outcome = (|| -> Result<_> {
                let (x_train, y_train) = rows_for(&split.train);
                let (x_test, y_test) = rows_for(&split.test);
                let solver = SolverConfig { seed, ..config.solver };
                let search = grid_search(&x_train, &y_train, &config.grid, &solver)?;
                let pred = search.model.predict_batch(&x_test)?;
                Ok((
                    search.hyperparams,
                    srcc(&pred, &y_test)?,
                    plcc(&pred, &y_test)?,
                    rmse(&pred, &y_test)?,
                ))
            })();
            match outcome {
                Ok((hp, s, p, e)) => {
                    row.hyperparams = Some(hp);
                    row.srcc = Some(s);
                    row.plcc = Some(p);
                    row.rmse = Some(e);
                }
                Err(err) => row.error = Some(err.to_string()),
            }
            row
        })
        .collect::<Vec<_>>();

    Ok(EvalReport {
        version: REPORT_FORMAT_VERSION,
        repeats: config.repeats,
        ratio: config.ratio,
        master_seed: config.master_seed,
        feature_dim: dim.unwrap_or(0),
        aggregate: Aggregate::from_repeats(&per_repeat),
        per_repeat,
    })
}
