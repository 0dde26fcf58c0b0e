//! Agreement metrics, content-separated splits and the repeated
//! train/test protocol.

mod manifest;
mod metrics;
mod protocol;
mod split;

pub use self::manifest::{DatabaseKind, DatasetManifest, ManifestEntry};
pub use self::metrics::{midranks, plcc, rmse, srcc};
pub use self::protocol::{run_protocol, Aggregate, EvalReport, ProtocolConfig, RepeatResult, REPORT_FORMAT_VERSION};
pub use self::split::{content_split, derive_seed, Split};

#[cfg(test)]
mod tests;
