use crate::media::GrayFrame;

const BLOCK: usize = 64;
/// Stripe period per block, row-major; 0 is a flat block.
const PITCHES: [usize; 9] = [64, 32, 8, 64, 8, 0, 0, 6, 4];
const CONTRASTS: [f64; 9] = [16.0, 4.0, 16.0, 4.0, 8.0, 16.0, 80.0, 16.0, 30.0];
const BASE: f64 = 100.0;

/// A 192x192 chart of nine 64-px blocks holding vertical bars of mixed
/// period and contrast. Its sharpness score falls steadily as Gaussian blur
/// grows from 0 to 4 px, because the blocks cross the blur threshold at
/// different strengths.
pub fn bar_chart() -> GrayFrame {
    GrayFrame::from_fn(3 * BLOCK, 3 * BLOCK, |x, y| {
        let b = (y / BLOCK) * 3 + x / BLOCK;
        let (p, c) = (PITCHES[b], CONTRASTS[b]);
        if p == 0 || (x / (p / 2)) % 2 == 0 {
            BASE
        } else {
            BASE + c
        }
    })
}
