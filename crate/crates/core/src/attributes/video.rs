//! Per-frame video content attributes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::imgproc::sobel;
use crate::media::{GrayFrame, RgbFrame};
use crate::stats::{mean, std_dev};

/// Standard deviation of gray-level intensities.
pub fn contrast(frame: &GrayFrame) -> f64 {
    std_dev(frame.data())
}

/// Hasler-Suesstrunk colorfulness on the opponent channels
/// `rg = R - G` and `yb = (R + G) / 2 - B`.
pub fn colorfulness(frame: &RgbFrame) -> f64 {
    let (rg, yb): (Vec<f64>, Vec<f64>) = frame
        .pixels()
        .map(|[r, g, b]| {
            let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
            (r - g, 0.5 * (r + g) - b)
        })
        .unzip();
    let (s_rg, s_yb) = (std_dev(&rg), std_dev(&yb));
    let (m_rg, m_yb) = (mean(&rg), mean(&yb));
    (s_rg * s_rg + s_yb * s_yb).sqrt() + (m_rg * m_rg + m_yb * m_yb).sqrt()
}

/// Sobel gradient magnitude and direction over the frame interior.
#[derive(Clone, Debug)]
pub struct GradientField {
    pub width: usize,
    pub height: usize,
    pub gmag: Vec<f64>,
    /// Radians in `(-pi, pi]`.
    pub gdir: Vec<f64>,
}

impl GradientField {
    pub fn new(frame: &GrayFrame) -> Result<Self> {
        let (w, h) = (frame.width(), frame.height());
        if w < 3 || h < 3 {
            return Err(Error::TooSmall {
                what: "frame side",
                min: 3,
                got: w.min(h),
            });
        }
        let (gx, gy) = sobel(frame);
        let n = (w - 2) * (h - 2);
        let mut gmag = Vec::with_capacity(n);
        let mut gdir = Vec::with_capacity(n);
        for y in 1..h - 1 {
            for x in 1..w - 1 {
                let (dx, dy) = (gx[y * w + x], gy[y * w + x]);
                gmag.push(dx.hypot(dy));
                let dir = dy.atan2(dx);
                gdir.push(if dir <= -PI { PI } else { dir });
            }
        }
        Ok(Self {
            width: w - 2,
            height: h - 2,
            gmag,
            gdir,
        })
    }
}

/// `(std(Gmag) + std(Gdir)) / 2`. Directions are treated as plain numbers,
/// not circular quantities.
pub fn spatial_information(frame: &GrayFrame) -> Result<f64> {
    let g = GradientField::new(frame)?;
    Ok(0.5 * (std_dev(&g.gmag) + std_dev(&g.gdir)))
}

/// Standard deviation of the pixel-wise difference `cur - prev`.
pub fn temporal_information(prev: &GrayFrame, cur: &GrayFrame) -> Result<f64> {
    if prev.width() != cur.width() || prev.height() != cur.height() {
        return Err(Error::DimensionMismatch {
            expected: prev.width() * prev.height(),
            found: cur.width() * cur.height(),
        });
    }
    let diff: Vec<f64> = cur.data().iter().zip(prev.data()).map(|(c, p)| c - p).collect();
    Ok(std_dev(&diff))
}

pub const CPBD_BLOCK: usize = 64;
pub const CPBD_BETA: f64 = 3.6;
pub const CPBD_EDGE_FRACTION: f64 = 0.002;
pub const CPBD_PROBABILITY_THRESHOLD: f64 = 0.63;

/// Cumulative probability of blur detection for one frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cpbd {
    pub score: f64,
    /// No measurable edge was found; `score` is 1.0 by convention.
    pub edgeless: bool,
}

/// Just-noticeable blur width for a block with the given contrast.
fn jnb_width(block_contrast: f64) -> f64 {
    if block_contrast <= 50.0 {
        5.0
    } else {
        3.0
    }
}

/// Edge width along a row: distance between the intensity extrema bracketing
/// the edge pixel at `x`.
fn edge_width(row: &[f64], x: usize, rising: bool) -> usize {
    let before = |a: f64, b: f64| if rising { a < b } else { a > b };
    let mut left = x;
    while left > 0 && before(row[left - 1], row[left]) {
        left -= 1;
    }
    let mut right = x;
    while right + 1 < row.len() && before(row[right], row[right + 1]) {
        right += 1;
    }
    right - left
}

/// CPBD sharpness.
///
/// Edges come from a thresholded, thinned Sobel map (threshold
/// `sqrt(4 * mean(|grad|^2))`). Widths are measured along rows at edges whose
/// gradient is mostly horizontal. Only 64x64 blocks holding more than 0.2%
/// edge pixels contribute; each edge there is blurred with probability
/// `1 - exp(-(w / w_jnb)^3.6)`, where `w_jnb` is 5 for block contrast up to 50
/// and 3 otherwise. The score is the fraction of edges with probability at
/// most 0.63.
pub fn cpbd(frame: &GrayFrame) -> Cpbd {
    let (w, h) = (frame.width(), frame.height());
    let (gx, gy) = sobel(frame);
    let mag2: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a * a + b * b).collect();
    let interior = w.saturating_sub(2) * h.saturating_sub(2);
    let threshold2 = if interior > 0 {
        4.0 * mag2.iter().sum::<f64>() / interior as f64
    } else {
        0.0
    };

    // thinned edge map: 0 = none, 1 = horizontal-gradient edge, 2 = other
    let mut edges = vec![0u8; w * h];
    if threshold2 > 0.0 {
        for y in 1..h.saturating_sub(1) {
            for x in 1..w - 1 {
                let i = y * w + x;
                if mag2[i] <= threshold2 {
                    continue;
                }
                if gx[i].abs() >= gy[i].abs() {
                    let (l, c, r) = (gx[i - 1].abs(), gx[i].abs(), gx[i + 1].abs());
                    if c >= l && c > r {
                        edges[i] = 1;
                    }
                } else {
                    let (u, c, d) = (gy[i - w].abs(), gy[i].abs(), gy[i + w].abs());
                    if c >= u && c > d {
                        edges[i] = 2;
                    }
                }
            }
        }
    }

    let data = frame.data();
    let min_edges = CPBD_EDGE_FRACTION * (CPBD_BLOCK * CPBD_BLOCK) as f64;
    let (mut total, mut sharp) = (0usize, 0usize);
    for by in 0..h / CPBD_BLOCK {
        for bx in 0..w / CPBD_BLOCK {
            let rows = by * CPBD_BLOCK..(by + 1) * CPBD_BLOCK;
            let cols = bx * CPBD_BLOCK..(bx + 1) * CPBD_BLOCK;
            let count = rows
                .clone()
                .flat_map(|y| cols.clone().map(move |x| y * w + x))
                .filter(|&i| edges[i] != 0)
                .count();
            if (count as f64) <= min_edges {
                continue;
            }
            let (lo, hi) = rows
                .clone()
                .flat_map(|y| data[y * w + cols.start..y * w + cols.end].iter().copied())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            let jnb = jnb_width(hi - lo);
            for y in rows {
                let row = &data[y * w..(y + 1) * w];
                for x in cols.clone() {
                    if edges[y * w + x] != 1 {
                        continue;
                    }
                    let width = edge_width(row, x, gx[y * w + x] > 0.0);
                    if width == 0 {
                        continue;
                    }
                    let p_blur = 1.0 - (-(width as f64 / jnb).powf(CPBD_BETA)).exp();
                    total += 1;
                    if p_blur <= CPBD_PROBABILITY_THRESHOLD {
                        sharp += 1;
                    }
                }
            }
        }
    }
    if total == 0 {
        Cpbd {
            score: 1.0,
            edgeless: true,
        }
    } else {
        Cpbd {
            score: sharp as f64 / total as f64,
            edgeless: false,
        }
    }
}
