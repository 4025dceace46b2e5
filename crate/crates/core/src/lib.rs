//! Pure preprocessing kernels for two-photon capillary volumes.
//!
//! Raw frame stacks come in as [`VolumeTensor`]s. Two branches turn them into
//! model inputs: [`image_stream::build_image_stream`] produces the
//! background-separated 112×112 stack, and [`pipeline::build_pointcloud_stream`]
//! produces a denoised vessel point cloud plus the voxel-suppressed volume.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI live
//! in the companion `clogprep` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dbscan;
pub mod error;
pub mod gaussian;
pub mod image_stream;
pub mod metrics;
pub mod pipeline;
pub mod pointcloud;
pub mod roi;
pub mod synth;
pub mod threshold;
pub mod volume;

pub use dbscan::{dbscan_filter, dbscan_labels, DbscanParams};
pub use error::{Error, Result};
pub use image_stream::{build_image_stream, resize_frames, separate_background, ImageStreamTensor};
pub use metrics::{accuracy, confusion, mcc, ConfusionCounts, Label};
pub use pipeline::{build_pointcloud_stream, PointCloudConfig, ThresholdMode};
pub use pointcloud::{mask_to_points, sample_frames, voxelize, PointCloudSample};
pub use roi::{crop_to_roi, detect_roi, OrangeThresholds, RoiMask};
pub use synth::{generate_sample, SynthConfig, SynthSample};
pub use threshold::{otsu_threshold, percentile_threshold, BinaryMask3D};
pub use volume::{FilteredVolume, Rgb, Volume, VolumeTensor, CHANNELS};
