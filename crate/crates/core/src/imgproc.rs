//! Basic image filtering on [`GrayFrame`]s.

use crate::media::{GrayFrame, RgbFrame};

/// Sobel responses over the whole frame; border pixels are left at zero.
pub(crate) fn sobel(frame: &GrayFrame) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (frame.width(), frame.height());
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    if w < 3 || h < 3 {
        return (gx, gy);
    }
    let d = frame.data();
    for y in 1..h - 1 {
        let (up, mid, dn) = ((y - 1) * w, y * w, (y + 1) * w);
        for x in 1..w - 1 {
            gx[mid + x] = (d[up + x + 1] + 2.0 * d[mid + x + 1] + d[dn + x + 1])
                - (d[up + x - 1] + 2.0 * d[mid + x - 1] + d[dn + x - 1]);
            gy[mid + x] =
                (d[dn + x - 1] + 2.0 * d[dn + x] + d[dn + x + 1]) - (d[up + x - 1] + 2.0 * d[up + x] + d[up + x + 1]);
        }
    }
    (gx, gy)
}

/// Normalized 1-D Gaussian taps covering `radius` samples on each side.
pub(crate) fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let taps: Vec<f64> = (-r..=r)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

/// Separable correlation with replicated borders.
pub(crate) fn separable_filter(frame: &GrayFrame, taps: &[f64]) -> GrayFrame {
    let (w, h) = (frame.width(), frame.height());
    let r = (taps.len() / 2) as isize;
    let clampi = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let src = frame.data();
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            tmp[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * row[clampi(x as isize + k as isize - r, w)])
                .sum();
        }
    }
    GrayFrame::from_fn(w, h, |x, y| {
        taps.iter()
            .enumerate()
            .map(|(k, t)| t * tmp[clampi(y as isize + k as isize - r, h) * w + x])
            .sum()
    })
}

/// Gaussian blur with a kernel truncated at `ceil(4 sigma)`; `sigma <= 0`
/// returns a copy.
pub fn gaussian_blur(frame: &GrayFrame, sigma: f64) -> GrayFrame {
    if sigma <= 0.0 {
        return frame.clone();
    }
    let radius = (4.0 * sigma).ceil() as usize;
    separable_filter(frame, &gaussian_taps(sigma, radius))
}

/// Mean filter over a `size x size` window.
pub fn box_blur(frame: &GrayFrame, size: usize) -> GrayFrame {
    let size = size.max(1) | 1;
    separable_filter(frame, &vec![1.0 / size as f64; size])
}

/// Blurs each channel of an 8-bit frame and rounds back to 8 bits.
pub fn gaussian_blur_rgb(frame: &RgbFrame, sigma: f64) -> RgbFrame {
    if sigma <= 0.0 {
        return frame.clone();
    }
    let (w, h) = (frame.width(), frame.height());
    let channels: Vec<GrayFrame> = (0..3)
        .map(|c| {
            let plane = GrayFrame::from_fn(w, h, |x, y| f64::from(frame.pixel(x, y)[c]));
            gaussian_blur(&plane, sigma)
        })
        .collect();
    RgbFrame::from_fn(w, h, |x, y| {
        let q = |c: usize| channels[c].at(x, y).round().clamp(0.0, 255.0) as u8;
        [q(0), q(1), q(2)]
    })
}

/// Rounds intensities to the nearest 8-bit code value.
pub fn quantize(frame: &GrayFrame) -> GrayFrame {
    frame.map(|v| v.round().clamp(0.0, 255.0))
}
