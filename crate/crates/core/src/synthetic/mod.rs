//! Deterministic synthetic data: rating panels, a blur test chart and an
//! audio-visual benchmark with known degradations.

mod benchmark;
mod chart;
mod panel;

pub use self::benchmark::{write_benchmark, BenchmarkItem, BenchmarkSpec};
pub use self::chart::bar_chart;
pub use self::panel::{add_random_subject, consistent_panel, PanelSpec};
