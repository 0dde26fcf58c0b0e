//! Windowed real-input DFT helpers.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Periodic Hann window of length `n`.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Hann-windowed DFT of fixed-length frames, returning the one-sided
/// spectrum (`n / 2 + 1` bins).
pub(crate) struct Spectrum {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    buf: Vec<Complex<f64>>,
}

impl Spectrum {
    pub fn new(n: usize) -> Self {
        Self::zero_padded(n, n)
    }

    /// Frames of `frame_len` samples, zero-padded to an `nfft`-point DFT.
    pub fn zero_padded(frame_len: usize, nfft: usize) -> Self {
        assert!(nfft >= frame_len);
        Self {
            fft: FftPlanner::new().plan_fft_forward(nfft),
            window: hann(frame_len),
            buf: vec![Complex::default(); nfft],
        }
    }

    fn transform(&mut self, frame: &[f64]) -> &[Complex<f64>] {
        debug_assert_eq!(frame.len(), self.window.len());
        let n = self.window.len();
        for ((b, x), w) in self.buf.iter_mut().zip(frame).zip(&self.window) {
            *b = Complex::new(x * w, 0.0);
        }
        self.buf[n..].fill(Complex::default());
        self.fft.process(&mut self.buf);
        &self.buf[..self.buf.len() / 2 + 1]
    }

    pub fn magnitude(&mut self, frame: &[f64]) -> Vec<f64> {
        self.transform(frame).iter().map(|c| c.norm()).collect()
    }

    pub fn power(&mut self, frame: &[f64]) -> Vec<f64> {
        self.transform(frame).iter().map(|c| c.norm_sqr()).collect()
    }
}
