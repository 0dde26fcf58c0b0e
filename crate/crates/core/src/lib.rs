pub mod attributes;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod imgproc;
pub mod media;
pub mod regressor;
pub mod spectrum;
pub mod stats;
pub mod subjective;
pub mod synthetic;

pub use error::{Error, Result};
