//! Point-cloud branch: ROI crop, resize, 3D low-pass, frame sampling,
//! thresholding, DBSCAN cleanup and voxel suppression.

use crate::dbscan::{dbscan_filter, DbscanParams};
use crate::error::{Error, Result};
use crate::gaussian::gaussian_lpf_3d;
use crate::image_stream::{resize_frames, STREAM_SIZE};
use crate::pointcloud::{mask_to_points, sample_indices, voxelize, PointCloudSample};
use crate::roi::{crop_to_roi, detect_roi, OrangeThresholds, RoiMask};
use crate::threshold::{otsu_threshold, percentile_threshold, BinaryMask3D};
use crate::volume::{VolumeTensor, CHANNELS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    Otsu,
    /// Per-channel nearest-rank percentiles `(r, g, b)`.
    Percentile([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCloudConfig {
    pub orange: OrangeThresholds,
    pub sigma: f64,
    pub n_prime: usize,
    pub threshold: ThresholdMode,
    pub dbscan: DbscanParams,
    pub largest_cluster_only: bool,
}

impl Default for PointCloudConfig {
    fn default() -> Self {
        Self {
            orange: OrangeThresholds::default(),
            sigma: 1.0,
            n_prime: 32,
            threshold: ThresholdMode::Otsu,
            dbscan: DbscanParams::default(),
            largest_cluster_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudStream {
    /// 112×112×N' volume with non-vessel voxels set to black.
    pub volume: VolumeTensor,
    pub cloud: PointCloudSample,
    /// Otsu level, when Otsu thresholding was used.
    pub level: Option<u8>,
}

pub fn build_pointcloud_stream(raw: &VolumeTensor, cfg: &PointCloudConfig) -> Result<PointCloudStream> {
    if cfg.n_prime == 0 || cfg.n_prime > raw.depth() {
        return Err(Error::BadCount { requested: cfg.n_prime, depth: raw.depth() });
    }
    cfg.dbscan.validate()?;
    let roi = detect_roi(raw, &cfg.orange)?;
    let (cropped, mask) = crop_to_roi(raw, &roi)?;
    let cleaned = suppress_overlay(&cropped, &mask, &cfg.orange);
    let resized = resize_frames(&cleaned, STREAM_SIZE, STREAM_SIZE)?;
    let filtered = gaussian_lpf_3d(&resized, cfg.sigma)?;

    let indices = sample_indices(resized.depth(), cfg.n_prime)?;
    let sampled = resized.select_frames(&indices)?;
    let sampled_filtered = filtered.select_frames(&indices)?;

    let (level, fg): (Option<u8>, BinaryMask3D) = match cfg.threshold {
        ThresholdMode::Otsu => {
            let (t, m) = otsu_threshold(&sampled_filtered)?;
            (Some(t), m)
        }
        ThresholdMode::Percentile(p) => (None, percentile_threshold(&sampled_filtered.quantize(), p)?),
    };
    let cloud = mask_to_points(&fg, &sampled)?;
    let cloud = dbscan_filter(&cloud, &cfg.dbscan, cfg.largest_cluster_only)?;
    let volume = voxelize(&cloud, &sampled)?;
    Ok(PointCloudStream { volume, cloud, level })
}

/// Blacks out pixels outside the ROI interior and the overlay pixels
/// themselves, in every frame. Overlay pixels are the frame-0 pixels the
/// orange classifier accepts.
fn suppress_overlay(v: &VolumeTensor, roi: &RoiMask, orange: &OrangeThresholds) -> VolumeTensor {
    let drop: alloc::vec::Vec<bool> = v
        .frame(0)
        .chunks_exact(CHANNELS)
        .zip(roi.pixels())
        .map(|(px, &inside)| !inside || orange.is_orange([px[0], px[1], px[2]]))
        .collect();
    let mut out = v.clone();
    for z in 0..v.depth() {
        for (px, &d) in out.frame_mut(z).chunks_exact_mut(CHANNELS).zip(&drop) {
            if d {
                px.fill(0);
            }
        }
    }
    out
}
