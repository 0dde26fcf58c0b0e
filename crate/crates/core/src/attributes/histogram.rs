use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
}

/// Equal-width histogram over `[min, max]` of the finite values. The last
/// bin is closed on the right. A constant input gets a unit-wide range.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::InvalidInput("histogram needs at least one bin".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("histogram input ({bad})")));
    }
    if values.is_empty() {
        return Err(Error::InvalidInput("histogram of no values".into()));
    }
    let (mut lo, mut hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            bin_left: lo + k as f64 * width,
            bin_right: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            count,
        })
        .collect())
}

pub fn write_histogram_csv<W: Write>(writer: W, bins: &[HistogramBin]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for b in bins {
        w.serialize(b)?;
    }
    w.flush()?;
    Ok(())
}
