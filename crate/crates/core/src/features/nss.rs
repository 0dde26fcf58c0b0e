//! Natural-scene-statistics (BRISQUE) features of luminance frames.

use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::imgproc::gaussian_taps;
use crate::media::{sample_frames, to_grayscale, FrameSequence, GrayFrame};
use crate::stats::{pooled_mean, sorted_sum};

pub const MSCN_RADIUS: usize = 3;
pub const MSCN_SIGMA: f64 = 7.0 / 6.0;
pub const MSCN_C: f64 = 1.0;
pub const BRISQUE_DIM: usize = 36;

const ALPHA_MIN: f64 = 0.2;
const ALPHA_MAX: f64 = 10.0;
const ALPHA_STEP: f64 = 0.001;
const MIN_FIT_SAMPLES: usize = 16;

/// Shape and variance of a zero-mean generalized Gaussian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GgdParams {
    pub alpha: f64,
    pub variance: f64,
}

/// Asymmetric generalized Gaussian with separate left and right scales.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AggdParams {
    pub alpha: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
    pub mean_offset: f64,
}

/// Mean-subtracted contrast-normalized coefficients, `(I - mu) / (sigma + 1)`
/// with a 7x7 Gaussian window (sigma 7/6) and replicated borders.
///
/// Both moments are taken over differences from the centre pixel, so a flat
/// neighbourhood gives exactly zero and an intensity offset cancels before
/// any rounding.
pub fn mscn(frame: &GrayFrame) -> Result<GrayFrame> {
    let (w, h) = (frame.width(), frame.height());
    let side = 2 * MSCN_RADIUS + 1;
    if w < side || h < side {
        return Err(Error::TooSmall {
            what: "MSCN frame side",
            min: side,
            got: w.min(h),
        });
    }
    let taps = gaussian_taps(MSCN_SIGMA, MSCN_RADIUS);
    let data = frame.data();
    let r = MSCN_RADIUS as isize;
    let clampi = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let mut diffs = Vec::with_capacity(taps.len() * taps.len());
    Ok(GrayFrame::from_fn(w, h, |x, y| {
        let centre = data[y * w + x];
        diffs.clear();
        for (dy, ty) in (-r..=r).zip(&taps) {
            let row = clampi(y as isize + dy, h) * w;
            for (dx, tx) in (-r..=r).zip(&taps) {
                diffs.push((ty * tx, data[row + clampi(x as isize + dx, w)] - centre));
            }
        }
        let shift: f64 = diffs.iter().map(|(wt, d)| wt * d).sum();
        let var: f64 = diffs.iter().map(|(wt, d)| wt * (d - shift) * (d - shift)).sum();
        -shift / (var.sqrt() + MSCN_C)
    }))
}

/// `(alpha, rho(alpha))` on a uniform grid, where
/// `rho(a) = Gamma(2/a)^2 / (Gamma(1/a) Gamma(3/a))` increases with `a`.
fn rho_grid() -> &'static [(f64, f64)] {
    static GRID: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    GRID.get_or_init(|| {
        let n = ((ALPHA_MAX - ALPHA_MIN) / ALPHA_STEP).round() as usize;
        (0..=n)
            .map(|i| {
                let a = ALPHA_MIN + i as f64 * ALPHA_STEP;
                (
                    a,
                    (2.0 * ln_gamma(2.0 / a) - ln_gamma(1.0 / a) - ln_gamma(3.0 / a)).exp(),
                )
            })
            .collect()
    })
}

/// Inverts `rho` by linear interpolation on the grid, clamping to its ends.
fn shape_from_ratio(ratio: f64) -> f64 {
    let grid = rho_grid();
    let k = grid.partition_point(|&(_, r)| r < ratio);
    if k == 0 {
        return grid[0].0;
    }
    if k == grid.len() {
        return grid[k - 1].0;
    }
    let ((a0, r0), (a1, r1)) = (grid[k - 1], grid[k]);
    a0 + (a1 - a0) * (ratio - r0) / (r1 - r0)
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooSmall {
            what: "distribution fit samples",
            min: MIN_FIT_SAMPLES,
            got: samples.len(),
        });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("distribution fit samples".into()));
    }
    if samples.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("all samples are zero".into()));
    }
    Ok(())
}

/// Moment-matching fit of a zero-mean generalized Gaussian.
pub fn ggd_fit(samples: &[f64]) -> Result<GgdParams> {
    check_samples(samples)?;
    let n = samples.len() as f64;
    let variance = samples.iter().map(|x| x * x).sum::<f64>() / n;
    let mean_abs = samples.iter().map(|x| x.abs()).sum::<f64>() / n;
    Ok(GgdParams {
        alpha: shape_from_ratio(mean_abs * mean_abs / variance),
        variance,
    })
}

/// Moment-matching fit of an asymmetric generalized Gaussian.
///
/// Each side's scale is the root mean square of the strictly negative or
/// strictly positive samples; squares are summed in sorted order so mirrored
/// data gives bit-identical scales.
pub fn aggd_fit(samples: &[f64]) -> Result<AggdParams> {
    check_samples(samples)?;
    let side = |keep: fn(f64) -> bool| -> Result<f64> {
        let sq: Vec<f64> = samples.iter().filter(|&&v| keep(v)).map(|v| v * v).collect();
        if sq.is_empty() {
            return Err(Error::Degenerate("samples lie on one side of zero".into()));
        }
        Ok((sorted_sum(&sq) / sq.len() as f64).sqrt())
    };
    let sigma_left = side(|v| v < 0.0)?;
    let sigma_right = side(|v| v > 0.0)?;

    let n = samples.len() as f64;
    let mean_abs = samples.iter().map(|x| x.abs()).sum::<f64>() / n;
    let mean_sq = samples.iter().map(|x| x * x).sum::<f64>() / n;
    let g = sigma_left / sigma_right;
    let ratio = mean_abs * mean_abs / mean_sq * (g.powi(3) + 1.0) * (g + 1.0) / (g * g + 1.0).powi(2);
    let alpha = shape_from_ratio(ratio);

    let (l1, l2, l3) = (ln_gamma(1.0 / alpha), ln_gamma(2.0 / alpha), ln_gamma(3.0 / alpha));
    let mean_offset = (sigma_right - sigma_left) * (l2 - l1).exp() * (0.5 * (l1 - l3)).exp();
    Ok(AggdParams {
        alpha,
        sigma_left,
        sigma_right,
        mean_offset,
    })
}

/// Products of each coefficient with its right, lower, lower-right and
/// lower-left neighbour, in that order.
fn neighbour_products(m: &GrayFrame) -> [Vec<f64>; 4] {
    let (w, h) = (m.width(), m.height());
    let at = |x: usize, y: usize| m.at(x, y);
    let mut out: [Vec<f64>; 4] = Default::default();
    for y in 0..h {
        for x in 0..w - 1 {
            out[0].push(at(x, y) * at(x + 1, y));
        }
    }
    for y in 0..h - 1 {
        for x in 0..w {
            out[1].push(at(x, y) * at(x, y + 1));
        }
        for x in 0..w - 1 {
            out[2].push(at(x, y) * at(x + 1, y + 1));
            out[3].push(at(x + 1, y) * at(x, y + 1));
        }
    }
    out
}

/// Halves each dimension by averaging 2x2 blocks.
fn half_scale(frame: &GrayFrame) -> GrayFrame {
    GrayFrame::from_fn(frame.width() / 2, frame.height() / 2, |x, y| {
        let (x2, y2) = (2 * x, 2 * y);
        0.25 * (frame.at(x2, y2) + frame.at(x2 + 1, y2) + frame.at(x2, y2 + 1) + frame.at(x2 + 1, y2 + 1))
    })
}

fn scale_features(frame: &GrayFrame, out: &mut Vec<f64>) -> Result<()> {
    let m = mscn(frame)?;
    let g = ggd_fit(m.data())?;
    out.extend([g.alpha, g.variance]);
    for p in neighbour_products(&m) {
        let a = aggd_fit(&p)?;
        out.extend([
            a.alpha,
            a.mean_offset,
            a.sigma_left * a.sigma_left,
            a.sigma_right * a.sigma_right,
        ]);
    }
    Ok(())
}

/// 36 BRISQUE features of one luminance frame.
///
/// Per scale (full, then half resolution): GGD shape and variance of the
/// MSCN field, then for the horizontal, vertical, main-diagonal and
/// anti-diagonal neighbour products the AGGD shape, mean offset, left
/// variance and right variance.
pub fn brisque_frame(frame: &GrayFrame) -> Result<[f64; BRISQUE_DIM]> {
    let min = 4 * MSCN_RADIUS + 2;
    if frame.width() < min || frame.height() < min {
        return Err(Error::TooSmall {
            what: "BRISQUE frame side",
            min,
            got: frame.width().min(frame.height()),
        });
    }
    let mut out = Vec::with_capacity(BRISQUE_DIM);
    scale_features(frame, &mut out)?;
    scale_features(&half_scale(frame), &mut out)?;
    Ok(out.try_into().expect("two scales of 18 features"))
}

/// Per-dimension mean of the BRISQUE features of every `stride`-th frame.
pub fn video_features(seq: &FrameSequence, stride: usize) -> Result<[f64; BRISQUE_DIM]> {
    let sampled = sample_frames(seq, stride)?;
    let per_frame = sampled
        .frames()
        .iter()
        .map(|f| brisque_frame(&to_grayscale(f)))
        .collect::<Result<Vec<_>>>()?;
    Ok(std::array::from_fn(|k| {
        pooled_mean(&per_frame.iter().map(|f| f[k]).collect::<Vec<_>>())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::RgbFrame;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn noise(w: usize, h: usize, seed: u64) -> GrayFrame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = Normal::new(128.0, 20.0).unwrap();
        GrayFrame::from_fn(w, h, |_, _| n.sample(&mut rng))
    }

    /// Textured test frame: smooth gradients plus a checker and noise.
    fn textured(w: usize, h: usize, seed: u64) -> GrayFrame {
        let n = noise(w, h, seed);
        GrayFrame::from_fn(w, h, |x, y| {
            0.3 * n.at(x, y) + 40.0 * ((x / 5 + y / 7) % 2) as f64 + 0.5 * x as f64 + 30.0
        })
    }

    #[test]
    fn rho_grid_matches_closed_forms() {
        // rho(1) = Gamma(2)^2 / (Gamma(1) Gamma(3)) = 1/2, rho(2) = 2/pi.
        assert!((shape_from_ratio(0.5) - 1.0).abs() < 1e-6);
        assert!((shape_from_ratio(2.0 / std::f64::consts::PI) - 2.0).abs() < 1e-6);
        assert_eq!(shape_from_ratio(0.0), ALPHA_MIN);
        assert_eq!(shape_from_ratio(1.0), ALPHA_MAX);
    }

    #[test]
    fn mscn_constant_frame_is_zero() {
        let m = mscn(&GrayFrame::from_fn(9, 8, |_, _| 77.0)).unwrap();
        assert!(m.data().iter().all(|&v| v == 0.0));
        assert!(mscn(&GrayFrame::from_fn(6, 9, |_, _| 0.0)).is_err());
    }

    #[test]
    fn mscn_of_noise_has_near_unit_spread() {
        let m = mscn(&noise(128, 128, 3)).unwrap();
        let sd = crate::stats::std_dev(m.data());
        assert!((0.8..=1.1).contains(&sd), "sd = {sd}");
        let range = 255.0 / MSCN_C;
        assert!(m.data().iter().map(|v| v.abs()).sum::<f64>() / m.data().len() as f64 <= range);
    }

    /// MSCN from the textbook `E[I^2] - mu^2` variance, without the
    /// centre-pixel differencing.
    fn mscn_oracle(f: &GrayFrame) -> Vec<f64> {
        let taps = gaussian_taps(MSCN_SIGMA, MSCN_RADIUS);
        let (w, h) = (f.width() as isize, f.height() as isize);
        let px = |x: isize, y: isize| f.at(x.clamp(0, w - 1) as usize, y.clamp(0, h - 1) as usize);
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let (mut m1, mut m2) = (0.0, 0.0);
                for (i, ty) in taps.iter().enumerate() {
                    for (j, tx) in taps.iter().enumerate() {
                        let v = px(x + j as isize - 3, y + i as isize - 3);
                        m1 += ty * tx * v;
                        m2 += ty * tx * v * v;
                    }
                }
                out.push((px(x, y) - m1) / ((m2 - m1 * m1).abs().sqrt() + 1.0));
            }
        }
        out
    }

    #[test]
    fn mscn_matches_textbook_formula() {
        let f = textured(40, 33, 9);
        for (a, b) in mscn(&f).unwrap().data().iter().zip(mscn_oracle(&f)) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn mscn_of_white_noise_is_platykurtic() {
        // Monte Carlo with an independent implementation puts the GGD shape of
        // MSCN-normalized white noise at 2.98 (512x512 frame).
        let m = mscn(&noise(256, 256, 21)).unwrap();
        let alpha = ggd_fit(m.data()).unwrap().alpha;
        assert!((alpha - 3.0).abs() < 0.15, "alpha = {alpha}");
    }

    #[test]
    fn ggd_recovers_gaussian_and_laplacian_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g: Vec<f64> = (0..200_000)
            .map(|_| Normal::new(0.0, 1.0).unwrap().sample(&mut rng))
            .collect();
        let fit = ggd_fit(&g).unwrap();
        assert!((fit.alpha - 2.0).abs() < 0.05, "{fit:?}");
        assert!((fit.variance - 1.0).abs() < 0.02);

        let lap = rand_distr::Exp::new(1.0).unwrap();
        let l: Vec<f64> = (0..200_000)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * lap.sample(&mut rng))
            .collect();
        assert!((aggd_fit(&l).unwrap().alpha - 1.0).abs() < 0.15);
    }

    #[test]
    fn aggd_of_skewed_data_has_unequal_sides() {
        let s: Vec<f64> = (0..400)
            .map(|i| {
                if i % 2 == 0 {
                    -(i as f64) / 400.0
                } else {
                    3.0 * i as f64 / 400.0
                }
            })
            .collect();
        let a = aggd_fit(&s).unwrap();
        assert!(a.sigma_right > 2.5 * a.sigma_left);
        assert!(a.mean_offset > 0.0);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(aggd_fit(&[0.0; 32]), Err(Error::Degenerate(_))));
        assert!(matches!(aggd_fit(&[1.0; 32]), Err(Error::Degenerate(_))));
        assert!(matches!(ggd_fit(&[1.0; 8]), Err(Error::TooSmall { .. })));
        assert!(matches!(ggd_fit(&[f64::NAN; 20]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn brisque_shape_and_noise_gaussianity() {
        let f = brisque_frame(&noise(96, 96, 5)).unwrap();
        assert_eq!(f.len(), 36);
        assert!(f.iter().all(|v| v.is_finite()));
        assert!(brisque_frame(&noise(13, 40, 1)).is_err());
        assert!(brisque_frame(&textured(14, 14, 1)).is_ok());
    }

    #[test]
    fn video_features_pool_frames() {
        let frame = |s: u64| {
            let g = textured(40, 32, s);
            RgbFrame::from_fn(40, 32, |x, y| {
                let v = g.at(x, y).round().clamp(0.0, 255.0) as u8;
                [v, v, v]
            })
        };
        let one = FrameSequence::new(vec![frame(1)], 25.0).unwrap();
        let expect = brisque_frame(&to_grayscale(&one.frames()[0])).unwrap();
        assert_eq!(video_features(&one, 10).unwrap(), expect);

        let same = FrameSequence::new(vec![frame(1); 21], 25.0).unwrap();
        assert_eq!(video_features(&same, 10).unwrap(), expect);

        let mixed: Vec<RgbFrame> = (0..3).map(frame).collect();
        let reversed: Vec<RgbFrame> = mixed.iter().rev().cloned().collect();
        let a = video_features(&FrameSequence::new(mixed, 25.0).unwrap(), 1).unwrap();
        let b = video_features(&FrameSequence::new(reversed, 25.0).unwrap(), 1).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn aggd_mirrored_scales_are_exact(values in prop::collection::vec(1e-3f64..50.0, 8..200)) {
            let mirrored: Vec<f64> = values.iter().copied().chain(values.iter().map(|v| -v)).collect();
            let a = aggd_fit(&mirrored).unwrap();
            prop_assert_eq!(a.sigma_left, a.sigma_right);
            prop_assert_eq!(a.mean_offset, 0.0);
        }

        #[test]
        fn brisque_ignores_intensity_offset(seed in 0u64..1000, offset in -20.0f64..20.0) {
            let f = textured(32, 30, seed);
            let g = f.map(|v| v + offset);
            let (a, b) = (brisque_frame(&f).unwrap(), brisque_frame(&g).unwrap());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{} vs {}", x, y);
            }
        }
    }
}
