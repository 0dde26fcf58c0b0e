//! Mel-frequency cepstral coefficients pooled over audio segments.

use std::f64::consts::PI;

use crate::attributes::audio::frame_samples;
use crate::error::{Error, Result};
use crate::media::AudioSegment;
use crate::spectrum::Spectrum;
use crate::stats::{pooled_mean, pooled_std_dev};

pub const MFCC_FRAME_S: f64 = 0.025;
pub const MFCC_HOP_S: f64 = 0.010;
pub const MEL_FILTERS: usize = 26;
pub const MFCC_COEFFS: usize = 13;
pub const LOG_FLOOR: f64 = 1e-10;
pub const AUDIO_FEATURE_DIM: usize = 2 * MFCC_COEFFS;

pub type Cepstrum = [f64; MFCC_COEFFS];

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular filters with edges equally spaced on the mel scale between 0
/// and Nyquist, evaluated at the exact frequency of each DFT bin.
fn mel_filterbank(sample_rate: u32, nfft: usize) -> Vec<Vec<f64>> {
    let fs = f64::from(sample_rate);
    let top = hz_to_mel(fs / 2.0);
    let edges: Vec<f64> = (0..MEL_FILTERS + 2)
        .map(|i| mel_to_hz(top * i as f64 / (MEL_FILTERS + 1) as f64))
        .collect();
    (0..MEL_FILTERS)
        .map(|m| {
            let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
            (0..=nfft / 2)
                .map(|k| {
                    let f = k as f64 * fs / nfft as f64;
                    if f <= lo || f >= hi {
                        0.0
                    } else if f <= mid {
                        (f - lo) / (mid - lo)
                    } else {
                        (hi - f) / (hi - mid)
                    }
                })
                .collect()
        })
        .collect()
}

/// Orthonormal DCT-II rows `0..MFCC_COEFFS` over `MEL_FILTERS` inputs.
fn dct_matrix() -> Vec<[f64; MEL_FILTERS]> {
    let n = MEL_FILTERS as f64;
    (0..MFCC_COEFFS)
        .map(|k| {
            let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            std::array::from_fn(|i| scale * (PI * k as f64 * (2 * i + 1) as f64 / (2.0 * n)).cos())
        })
        .collect()
}

/// Reusable MFCC analysis for one sample rate: 25 ms periodic-Hann frames at
/// a 10 ms hop, zero-padded to the next power of two.
pub struct MfccExtractor {
    sample_rate: u32,
    frame_len: usize,
    spectrum: Spectrum,
    filters: Vec<Vec<f64>>,
    dct: Vec<[f64; MEL_FILTERS]>,
}

impl MfccExtractor {
    pub fn new(sample_rate: u32) -> Self {
        let frame_len = ((MFCC_FRAME_S * f64::from(sample_rate)).round() as usize).max(1);
        let nfft = frame_len.next_power_of_two();
        Self {
            sample_rate,
            frame_len,
            spectrum: Spectrum::zero_padded(frame_len, nfft),
            filters: mel_filterbank(sample_rate, nfft),
            dct: dct_matrix(),
        }
    }

    /// Samples in one analysis frame.
    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    /// One cepstrum per analysis frame; fails if `samples` is shorter than a
    /// frame.
    pub fn extract(&mut self, samples: &[f64]) -> Result<Vec<Cepstrum>> {
        let frames = frame_samples(samples, self.sample_rate, MFCC_FRAME_S, MFCC_HOP_S)?;
        Ok(frames
            .raw()
            .map(|frame| {
                let power = self.spectrum.power(frame);
                let log_mel: Vec<f64> = self
                    .filters
                    .iter()
                    .map(|f| (f.iter().zip(&power).map(|(w, p)| w * p).sum::<f64>() + LOG_FLOOR).ln())
                    .collect();
                std::array::from_fn(|k| self.dct[k].iter().zip(&log_mel).map(|(c, l)| c * l).sum())
            })
            .collect())
    }
}

/// MFCCs of a single stretch of audio.
pub fn mfcc(samples: &[f64], sample_rate: u32) -> Result<Vec<Cepstrum>> {
    MfccExtractor::new(sample_rate).extract(samples)
}

/// Segment-pooled MFCC statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct AudioFeatures {
    /// Mean over segments of each segment's frame-averaged cepstrum.
    pub mean: Cepstrum,
    /// Population standard deviation over segments.
    pub std: Cepstrum,
    /// Segments shorter than one analysis frame, left out of the pooling.
    pub skipped_segments: usize,
}

impl AudioFeatures {
    pub fn values(&self) -> [f64; AUDIO_FEATURE_DIM] {
        std::array::from_fn(|i| {
            if i < MFCC_COEFFS {
                self.mean[i]
            } else {
                self.std[i - MFCC_COEFFS]
            }
        })
    }
}

pub fn audio_features(segments: &[AudioSegment<'_>], sample_rate: u32) -> Result<AudioFeatures> {
    let mut extractor = MfccExtractor::new(sample_rate);
    let mut per_segment: Vec<Cepstrum> = Vec::with_capacity(segments.len());
    let mut skipped = 0;
    for seg in segments {
        if seg.samples.len() < extractor.frame_len() {
            skipped += 1;
            continue;
        }
        let frames = extractor.extract(seg.samples)?;
        let n = frames.len() as f64;
        per_segment.push(std::array::from_fn(|k| frames.iter().map(|c| c[k]).sum::<f64>() / n));
    }
    if per_segment.is_empty() {
        return Err(Error::Degenerate("no audio segment spans one MFCC frame".into()));
    }
    let column = |k: usize| per_segment.iter().map(|c| c[k]).collect::<Vec<_>>();
    Ok(AudioFeatures {
        mean: std::array::from_fn(|k| pooled_mean(&column(k))),
        std: std::array::from_fn(|k| pooled_std_dev(&column(k))),
        skipped_segments: skipped,
    })
}
