//! Image-modality tensor: ROI crop, sentinel background, 112×112 resize.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::roi::{self, OrangeThresholds, RoiMask};
use crate::volume::{Rgb, VolumeTensor, CHANNELS};

/// Spatial size of both model inputs.
pub const STREAM_SIZE: usize = 112;

/// Background color that does not occur in the source data.
pub const DEFAULT_SENTINEL: Rgb = [0, 0, 255];

/// A 112×112 background-separated stack with the original frame count.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStreamTensor {
    volume: VolumeTensor,
    mask: RoiMask,
    sentinel: Rgb,
    sentinel_collisions: usize,
}

impl ImageStreamTensor {
    pub fn volume(&self) -> &VolumeTensor {
        &self.volume
    }

    pub fn into_volume(self) -> VolumeTensor {
        self.volume
    }

    /// The nearest-neighbor resized ROI mask that was re-stamped.
    pub fn mask(&self) -> &RoiMask {
        &self.mask
    }

    pub fn sentinel(&self) -> Rgb {
        self.sentinel
    }

    /// ROI voxels of the cropped input that already held the sentinel color.
    pub fn sentinel_collisions(&self) -> usize {
        self.sentinel_collisions
    }
}

/// Result of [`separate_background`]. `sentinel_collisions` counts ROI voxels
/// that already held the sentinel color; the output is produced regardless.
#[derive(Debug, Clone, PartialEq)]
pub struct Separated {
    pub volume: VolumeTensor,
    pub sentinel_collisions: usize,
}

/// Replaces every pixel outside the ROI with `sentinel`, in every frame.
pub fn separate_background(v: &VolumeTensor, roi: &RoiMask, sentinel: Rgb) -> Result<Separated> {
    roi::ensure_mask_matches(v, roi)?;
    let mut out = v.clone();
    let mut sentinel_collisions = 0;
    let mask = roi.pixels();
    for z in 0..v.depth() {
        let frame = out.frame_mut(z);
        for (px, &inside) in frame.chunks_exact_mut(CHANNELS).zip(mask) {
            if inside {
                sentinel_collisions += usize::from(px == sentinel);
            } else {
                px.copy_from_slice(&sentinel);
            }
        }
    }
    Ok(Separated { volume: out, sentinel_collisions })
}

/// Bilinear resize of each frame with half-pixel centers; results are rounded
/// half away from zero.
pub fn resize_frames(v: &VolumeTensor, width: usize, height: usize) -> Result<VolumeTensor> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidVolume { reason: "resize target must be at least 1x1" });
    }
    if v.dims().0 == width && v.dims().1 == height {
        return Ok(v.clone());
    }
    let xs = axis_taps(v.width(), width);
    let ys = axis_taps(v.height(), height);
    let mut data = Vec::with_capacity(width * height * v.depth() * CHANNELS);
    for z in 0..v.depth() {
        for &(y0, y1, fy) in &ys {
            for &(x0, x1, fx) in &xs {
                let p00 = v.voxel(x0, y0, z);
                let p10 = v.voxel(x1, y0, z);
                let p01 = v.voxel(x0, y1, z);
                let p11 = v.voxel(x1, y1, z);
                for c in 0..CHANNELS {
                    let top = f64::from(p00[c]) + (f64::from(p10[c]) - f64::from(p00[c])) * fx;
                    let bottom = f64::from(p01[c]) + (f64::from(p11[c]) - f64::from(p01[c])) * fx;
                    let value = top + (bottom - top) * fy;
                    data.push(libm::round(value).clamp(0.0, 255.0) as u8);
                }
            }
        }
    }
    VolumeTensor::new(width, height, v.depth(), data)
}

/// Source sample positions along one axis: `(lo, hi, frac)` per output index.
fn axis_taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let s = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let lo = libm::floor(s) as usize;
            let hi = (lo + 1).min(src - 1);
            (lo, hi, s - lo as f64)
        })
        .collect()
}

/// Nearest-neighbor resize of a mask, sampling the source pixel under each
/// output pixel center.
pub fn resize_mask(roi: &RoiMask, width: usize, height: usize) -> Result<RoiMask> {
    let nearest = |i: usize, src: usize, dst: usize| ((2 * i + 1) * src / (2 * dst)).min(src - 1);
    let mut mask = Vec::with_capacity(width * height);
    for y in 0..height {
        let sy = nearest(y, roi.height(), height);
        for x in 0..width {
            mask.push(roi.contains(nearest(x, roi.width(), width), sy));
        }
    }
    RoiMask::from_pixels(width, height, mask)
}

/// ROI detection, crop, sentinel background and 112×112 resize. The sentinel
/// is stamped again after interpolation so no blended edge colors remain
/// outside the mask.
pub fn build_image_stream(
    raw: &VolumeTensor,
    thresholds: &OrangeThresholds,
    sentinel: Rgb,
) -> Result<ImageStreamTensor> {
    let roi = roi::detect_roi(raw, thresholds)?;
    let (cropped, mask) = roi::crop_to_roi(raw, &roi)?;
    let separated = separate_background(&cropped, &mask, sentinel)?;
    let resized = resize_frames(&separated.volume, STREAM_SIZE, STREAM_SIZE)?;
    let mask = resize_mask(&mask, STREAM_SIZE, STREAM_SIZE)?;
    let volume = separate_background(&resized, &mask, sentinel)?.volume;
    Ok(ImageStreamTensor { volume, mask, sentinel, sentinel_collisions: separated.sentinel_collisions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn all_true_mask_is_identity() {
        let v = VolumeTensor::new(2, 1, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let roi = RoiMask::from_pixels(2, 1, vec![true, true]).unwrap();
        let s = separate_background(&v, &roi, DEFAULT_SENTINEL).unwrap();
        assert_eq!(s.volume, v);
        assert_eq!(s.sentinel_collisions, 0);
    }

    #[test]
    fn sentinel_collision_is_counted_not_fatal() {
        let v = VolumeTensor::new(2, 1, 2, vec![0, 0, 255, 4, 5, 6, 0, 0, 255, 1, 1, 1]).unwrap();
        let roi = RoiMask::from_pixels(2, 1, vec![true, false]).unwrap();
        let s = separate_background(&v, &roi, DEFAULT_SENTINEL).unwrap();
        assert_eq!(s.sentinel_collisions, 2);
        assert_eq!(s.volume.data(), &[0, 0, 255, 0, 0, 255, 0, 0, 255, 0, 0, 255]);
    }

    #[test]
    fn separate_rejects_mismatched_mask() {
        let v = VolumeTensor::filled(4, 4, 1, [0, 0, 0]).unwrap();
        let roi = RoiMask::from_pixels(2, 2, vec![true; 4]).unwrap();
        assert!(matches!(
            separate_background(&v, &roi, DEFAULT_SENTINEL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn upscale_two_columns_follows_half_pixel_formula() {
        // Source x for output columns: -0.25, 0.25, 0.75, 1.25 -> clamped to
        // 0, 0.25, 0.75, 1 -> 0, 63.75, 191.25, 255.
        let v = VolumeTensor::new(2, 2, 1, vec![0, 0, 0, 255, 255, 255, 0, 0, 0, 255, 255, 255]).unwrap();
        let r = resize_frames(&v, 4, 4).unwrap();
        for y in 0..4 {
            let row: Vec<u8> = (0..4).map(|x| r.voxel(x, y, 0)[0]).collect();
            assert_eq!(row, vec![0, 64, 191, 255]);
        }
    }

    #[test]
    fn constant_volume_stays_constant() {
        let v = VolumeTensor::filled(37, 23, 3, [9, 99, 199]).unwrap();
        let r = resize_frames(&v, 112, 112).unwrap();
        assert_eq!(r.dims(), (112, 112, 3));
        assert!(r.data().chunks(3).all(|p| p == [9, 99, 199]));
    }

    #[test]
    fn same_size_resize_is_identity() {
        let data: Vec<u8> = (0..112 * 112 * 3).map(|i| (i * 31 % 251) as u8).collect();
        let v = VolumeTensor::new(112, 112, 1, data).unwrap();
        assert_eq!(resize_frames(&v, 112, 112).unwrap(), v);
    }

    #[test]
    fn nearest_mask_resize_picks_center_pixel() {
        let roi = RoiMask::from_pixels(2, 1, vec![false, true]).unwrap();
        let r = resize_mask(&roi, 4, 1).unwrap();
        assert_eq!(r.pixels(), &[false, false, true, true]);
    }
}
