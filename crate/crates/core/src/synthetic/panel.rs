use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::subjective::ScoreMatrix;

/// Shape of a consistent synthetic panel on a 0-100 scale.
///
/// Each subject rates `50 + a (q - 50) + b + e` where `q` is the sequence's
/// true quality, `a` and `b` are a per-subject slope and offset, and `e` is
/// bounded uniform noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PanelSpec {
    pub subjects: usize,
    pub sequences: usize,
    pub quality_range: (f64, f64),
    pub slope_range: (f64, f64),
    pub offset_range: (f64, f64),
    pub noise_half_width: f64,
}

impl Default for PanelSpec {
    fn default() -> Self {
        Self {
            subjects: 21,
            sequences: 100,
            quality_range: (20.0, 80.0),
            slope_range: (1.0, 1.0),
            offset_range: (-5.0, 5.0),
            noise_half_width: 16.0,
        }
    }
}

pub fn consistent_panel(spec: &PanelSpec, seed: u64) -> ScoreMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quality: Vec<f64> = (0..spec.sequences)
        .map(|_| rng.random_range(spec.quality_range.0..=spec.quality_range.1))
        .collect();
    let scores = (0..spec.subjects)
        .map(|_| {
            let a = rng.random_range(spec.slope_range.0..=spec.slope_range.1);
            let b = rng.random_range(spec.offset_range.0..=spec.offset_range.1);
            quality
                .iter()
                .map(|q| {
                    let e = rng.random_range(-spec.noise_half_width..=spec.noise_half_width);
                    Some((50.0 + a * (q - 50.0) + b + e).clamp(0.0, 100.0))
                })
                .collect()
        })
        .collect();
    ScoreMatrix::new(
        (0..spec.subjects).map(|i| format!("s{:02}", i + 1)).collect(),
        (0..spec.sequences).map(|j| format!("seq{:03}", j + 1)).collect(),
        scores,
        (0.0, 100.0),
    )
    .expect("generated scores lie on the scale")
}

/// Appends a subject who rates uniformly at random over the scale.
pub fn add_random_subject(panel: &ScoreMatrix, seed: u64) -> ScoreMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = panel.bounds();
    let mut subjects = panel.subjects().to_vec();
    subjects.push("random".into());
    let mut scores = panel.scores().to_vec();
    scores.push(
        panel
            .sequences()
            .iter()
            .map(|_| Some(rng.random_range(lo..=hi)))
            .collect(),
    );
    ScoreMatrix::new(subjects, panel.sequences().to_vec(), scores, panel.bounds()).expect("same shape and scale")
}
