//! Short-time audio attributes: energy fluctuation, zero-crossing rate,
//! spectral centroid and spectral entropy.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::media::AudioSignal;
use crate::spectrum::{hann, Spectrum};
use crate::stats::{mean, std_dev};

pub const ATTRIBUTE_WINDOW_S: f64 = 0.050;
pub const ATTRIBUTE_HOP_S: f64 = 0.025;

const ENERGY_EPS: f64 = 1e-12;

/// A signal cut into fixed-length frames at a fixed hop. A trailing partial
/// frame is dropped.
#[derive(Clone, Debug)]
pub struct AudioFrames<'a> {
    samples: &'a [f64],
    sample_rate: u32,
    win: usize,
    hop: usize,
    count: usize,
}

/// Frames `signal` with `win`/`hop` given in seconds.
pub fn frame_audio(signal: &AudioSignal, win: f64, hop: f64) -> Result<AudioFrames<'_>> {
    frame_samples(signal.samples(), signal.sample_rate(), win, hop)
}

pub(crate) fn frame_samples(samples: &[f64], sample_rate: u32, win: f64, hop: f64) -> Result<AudioFrames<'_>> {
    if !(win > 0.0 && hop > 0.0) {
        return Err(Error::InvalidInput("window and hop must be positive".into()));
    }
    let fs = f64::from(sample_rate);
    let win_n = (win * fs).round() as usize;
    let hop_n = ((hop * fs).round() as usize).max(1);
    if win_n == 0 {
        return Err(Error::InvalidInput("window shorter than one sample".into()));
    }
    if win_n > samples.len() {
        return Err(Error::TooSmall {
            what: "signal length in samples",
            min: win_n,
            got: samples.len(),
        });
    }
    Ok(AudioFrames {
        samples,
        sample_rate,
        win: win_n,
        hop: hop_n,
        count: (samples.len() - win_n) / hop_n + 1,
    })
}

impl<'a> AudioFrames<'a> {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn frame_len(&self) -> usize {
        self.win
    }

    pub fn hop_len(&self) -> usize {
        self.hop
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    fn range(&self, j: usize) -> Range<usize> {
        j * self.hop..j * self.hop + self.win
    }

    /// Unwindowed frames.
    pub fn raw(&self) -> impl Iterator<Item = &'a [f64]> + '_ {
        (0..self.count).map(move |j| &self.samples[self.range(j)])
    }

    /// Hann-windowed copies of every frame.
    pub fn windowed(&self) -> Vec<Vec<f64>> {
        let w = hann(self.win);
        self.raw()
            .map(|f| f.iter().zip(&w).map(|(x, w)| x * w).collect())
            .collect()
    }

    /// One-sided magnitude spectrum of every windowed frame.
    fn magnitudes(&self) -> Vec<Vec<f64>> {
        let mut spectrum = Spectrum::new(self.win);
        self.raw().map(|f| spectrum.magnitude(f)).collect()
    }

    fn bin_hz(&self) -> f64 {
        f64::from(self.sample_rate) / self.win as f64
    }
}

/// Mean absolute change of frame energy between successive frames, relative
/// to the mean frame energy.
pub fn sef(frames: &AudioFrames<'_>) -> f64 {
    let energies: Vec<f64> = frames
        .raw()
        .map(|f| f.iter().map(|x| x * x).sum::<f64>() / f.len() as f64)
        .collect();
    if energies.len() < 2 {
        return 0.0;
    }
    let fluctuation = mean(&energies.windows(2).map(|e| (e[1] - e[0]).abs()).collect::<Vec<_>>());
    fluctuation / (mean(&energies) + ENERGY_EPS)
}

/// Sign changes per adjacent sample pair, averaged over frames. Zero counts
/// as positive.
pub fn zcr(frames: &AudioFrames<'_>) -> f64 {
    let rates: Vec<f64> = frames
        .raw()
        .map(|f| {
            if f.len() < 2 {
                return 0.0;
            }
            let changes = f.windows(2).filter(|p| (p[0] >= 0.0) != (p[1] >= 0.0)).count();
            changes as f64 / (f.len() - 1) as f64
        })
        .collect();
    mean(&rates)
}

/// Per-frame magnitude-weighted mean frequency in Hz.
pub fn frame_centroids(frames: &AudioFrames<'_>) -> Vec<f64> {
    let bin_hz = frames.bin_hz();
    frames
        .magnitudes()
        .iter()
        .map(|mag| {
            let total: f64 = mag.iter().sum();
            if total <= 0.0 {
                return 0.0;
            }
            mag.iter().enumerate().map(|(k, m)| k as f64 * bin_hz * m).sum::<f64>() / total
        })
        .collect()
}

/// Largest per-frame spectral centroid.
pub fn spectral_centroid(frames: &AudioFrames<'_>) -> f64 {
    frame_centroids(frames).into_iter().fold(0.0, f64::max)
}

/// Per-frame Shannon entropy of the normalized power spectrum, divided by
/// `log2(K)` so it lies in `[0, 1]`.
pub fn frame_entropies(frames: &AudioFrames<'_>) -> Vec<f64> {
    frames
        .magnitudes()
        .iter()
        .map(|mag| {
            let power: Vec<f64> = mag.iter().map(|m| m * m).collect();
            let total: f64 = power.iter().sum();
            if total <= 0.0 || power.len() < 2 {
                return 0.0;
            }
            let h: f64 = power
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|p| {
                    let q = p / total;
                    -q * q.log2()
                })
                .sum();
            (h / (power.len() as f64).log2()).clamp(0.0, 1.0)
        })
        .collect()
}

/// Standard deviation of the per-frame normalized spectral entropy.
pub fn spectral_entropy(frames: &AudioFrames<'_>) -> f64 {
    std_dev(&frame_entropies(frames))
}
