//! File formats, dataset manifests and batch orchestration around
//! [`clogprep_core`].
//!
//! * `.cvol` packed volumes and PNG frame directories ([`volume_io`])
//! * ASCII PLY point clouds ([`ply`])
//! * `manifest.json` and stratified 75:15:10 splits ([`manifest`])
//! * pipeline configuration ([`config`]), batch preprocessing ([`preprocess`]),
//!   synthetic datasets ([`dataset`]) and metric evaluation ([`eval`])

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod manifest;
pub mod ply;
pub mod preprocess;
pub mod volume_io;

pub use clogprep_core as core;
pub use error::{Error, Result};
