//! File formats, configuration and the end-to-end pipeline around
//! [`refsum_core`].

pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod records;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, RunReport};
