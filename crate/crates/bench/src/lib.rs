//! Deterministic inputs for the pipeline benchmarks.

use avqa_core::media::{to_grayscale, AudioSignal, GrayFrame};
use avqa_core::synthetic::BenchmarkSpec;

/// One rendered clip from the default synthetic benchmark.
pub fn sample_clip() -> (GrayFrame, AudioSignal) {
    let spec = BenchmarkSpec {
        duration_s: 1.0,
        ..BenchmarkSpec::default()
    };
    let item = &spec.items()[7];
    let (video, audio) = spec.render(item).expect("default spec renders");
    (to_grayscale(&video.frames()[0]), audio)
}

/// `n` rows of dimension `d` with a smooth target, from a fixed LCG.
pub fn regression_problem(n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| next()).collect()).collect();
    let targets = rows
        .iter()
        .map(|r| 50.0 + 20.0 * r.iter().take(4).sum::<f64>().sin())
        .collect();
    (rows, targets)
}
