//! Subjective score processing: per-subject z-score normalization onto
//! `[0, 100]`, BT.500 subject screening and MOS computation.

mod io;

pub use self::io::{read_score_csv, write_mos_csv, write_rejected_csv};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{pooled_mean, pooled_std_dev};

/// Raw or normalized opinion scores, one row per subject and one column per
/// sequence. `None` marks a missing rating.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    subjects: Vec<String>,
    sequences: Vec<String>,
    scores: Vec<Vec<Option<f64>>>,
    bounds: (f64, f64),
}

impl ScoreMatrix {
    pub fn new(
        subjects: Vec<String>,
        sequences: Vec<String>,
        scores: Vec<Vec<Option<f64>>>,
        bounds: (f64, f64),
    ) -> Result<Self> {
        let (lo, hi) = bounds;
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("bad rating scale [{lo}, {hi}]")));
        }
        if scores.len() != subjects.len() {
            return Err(Error::DimensionMismatch {
                expected: subjects.len(),
                found: scores.len(),
            });
        }
        for (name, row) in subjects.iter().zip(&scores) {
            if row.len() != sequences.len() {
                return Err(Error::DimensionMismatch {
                    expected: sequences.len(),
                    found: row.len(),
                });
            }
            if let Some(v) = row.iter().flatten().find(|v| !(lo..=hi).contains(*v)) {
                return Err(Error::InvalidInput(format!(
                    "subject {name}: score {v} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self {
            subjects,
            sequences,
            scores,
            bounds,
        })
    }

    pub fn subjects(&self) -> &[String] {
        &self.subjects
    }

    pub fn sequences(&self) -> &[String] {
        &self.sequences
    }

    pub fn scores(&self) -> &[Vec<Option<f64>>] {
        &self.scores
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    /// Non-missing scores of sequence `j` with their subject indices.
    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.scores
            .iter()
            .enumerate()
            .filter_map(move |(i, r)| r[j].map(|v| (i, v)))
    }
}

/// Normalized scores and the number of values clipped into `[0, 100]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub scores: ScoreMatrix,
    pub clipped: usize,
}

/// Maps each subject's scores to `100 (z + 3) / 6`, where `z` is the score
/// standardized by that subject's mean and population standard deviation,
/// and clips the result to `[0, 100]`.
pub fn zscore_normalize(raw: &ScoreMatrix) -> Result<Normalized> {
    let mut clipped = 0;
    let mut out = Vec::with_capacity(raw.scores.len());
    for (name, row) in raw.subjects.iter().zip(&raw.scores) {
        let present: Vec<f64> = row.iter().flatten().copied().collect();
        let (mu, sigma) = (pooled_mean(&present), pooled_std_dev(&present));
        if sigma <= 0.0 {
            return Err(Error::ZeroVarianceSubject(name.clone()));
        }
        out.push(
            row.iter()
                .map(|s| {
                    s.map(|r| {
                        let v = 100.0 * ((r - mu) / sigma + 3.0) / 6.0;
                        if !(0.0..=100.0).contains(&v) {
                            clipped += 1;
                        }
                        v.clamp(0.0, 100.0)
                    })
                })
                .collect(),
        );
    }
    Ok(Normalized {
        scores: ScoreMatrix {
            subjects: raw.subjects.clone(),
            sequences: raw.sequences.clone(),
            scores: out,
            bounds: (0.0, 100.0),
        },
        clipped,
    })
}

/// Outcome of BT.500 screening.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Screening {
    pub rejected: Vec<bool>,
    /// Per subject, scores at or above the upper threshold.
    pub above: Vec<usize>,
    /// Per subject, scores at or below the lower threshold.
    pub below: Vec<usize>,
}

impl Screening {
    /// Keeps every subject.
    pub fn none(subjects: usize) -> Self {
        Self {
            rejected: vec![false; subjects],
            above: vec![0; subjects],
            below: vec![0; subjects],
        }
    }
}

/// BT.500 subject rejection.
///
/// Per sequence the scores give a mean, a sample standard deviation `s` and
/// the kurtosis `m4 / m2^2`; the threshold is `2s` for a kurtosis in
/// `[2, 4]` and `sqrt(20) s` otherwise. A subject is rejected when more than
/// 5% of their scores fall outside the thresholds and those outliers are not
/// predominantly on one side (`|P - Q| / (P + Q) < 0.3`). Columns with
/// `s = 0` or fewer than two scores are skipped.
pub fn screen_subjects(scores: &ScoreMatrix) -> Result<Screening> {
    let m = scores.subjects.len();
    if m < 3 {
        return Err(Error::TooSmall {
            what: "subjects to screen",
            min: 3,
            got: m,
        });
    }
    let mut out = Screening::none(m);
    for j in 0..scores.sequences.len() {
        let col: Vec<(usize, f64)> = scores.column(j).collect();
        let n = col.len();
        if n < 2 {
            continue;
        }
        let values: Vec<f64> = col.iter().map(|&(_, v)| v).collect();
        let mean = pooled_mean(&values);
        let moment = |k: i32| values.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / n as f64;
        let m2 = moment(2);
        if m2 <= 0.0 {
            continue;
        }
        let s = (m2 * n as f64 / (n - 1) as f64).sqrt();
        let kurtosis = moment(4) / (m2 * m2);
        let threshold = if (2.0..=4.0).contains(&kurtosis) {
            2.0 * s
        } else {
            20f64.sqrt() * s
        };
        for &(i, v) in &col {
            if v >= mean + threshold {
                out.above[i] += 1;
            }
            if v <= mean - threshold {
                out.below[i] += 1;
            }
        }
    }
    for i in 0..m {
        let rated = scores.scores[i].iter().flatten().count();
        let (p, q) = (out.above[i] as f64, out.below[i] as f64);
        out.rejected[i] = rated > 0 && (p + q) / rated as f64 > 0.05 && (p - q).abs() / (p + q) < 0.3;
    }
    Ok(out)
}

/// Per-sequence mean opinion scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MosTable {
    pub ids: Vec<String>,
    pub mos: Vec<f64>,
    /// Retained, non-missing scores behind each MOS.
    pub counts: Vec<usize>,
    pub rejected_subjects: Vec<String>,
}

/// Averages the scores of subjects not marked in `rejected`.
pub fn compute_mos(normalized: &ScoreMatrix, rejected: &[bool]) -> Result<MosTable> {
    if rejected.len() != normalized.subjects.len() {
        return Err(Error::DimensionMismatch {
            expected: normalized.subjects.len(),
            found: rejected.len(),
        });
    }
    let mut mos = Vec::with_capacity(normalized.sequences.len());
    let mut counts = Vec::with_capacity(normalized.sequences.len());
    for (j, id) in normalized.sequences.iter().enumerate() {
        let kept: Vec<f64> = normalized
            .column(j)
            .filter(|&(i, _)| !rejected[i])
            .map(|(_, v)| v)
            .collect();
        if kept.is_empty() {
            return Err(Error::Degenerate(format!("sequence {id} has no retained scores")));
        }
        mos.push(pooled_mean(&kept));
        counts.push(kept.len());
    }
    Ok(MosTable {
        ids: normalized.sequences.clone(),
        mos,
        counts,
        rejected_subjects: normalized
            .subjects
            .iter()
            .zip(rejected)
            .filter(|(_, &r)| r)
            .map(|(s, _)| s.clone())
            .collect(),
    })
}

/// Normalization, optional screening on the normalized scores, then MOS.
pub fn process_scores(raw: &ScoreMatrix, screen: bool) -> Result<(MosTable, Normalized, Screening)> {
    let normalized = zscore_normalize(raw)?;
    let screening = if screen {
        screen_subjects(&normalized.scores)?
    } else {
        Screening::none(raw.subjects.len())
    };
    let table = compute_mos(&normalized.scores, &screening.rejected)?;
    Ok((table, normalized, screening))
}
