//! Frame-stack containers.
//!
//! Samples are stored frame-major, then row-major, with RGB interleaved:
//! the sample for channel `c` of pixel `(x, y)` in frame `z` lives at
//! `((z * height + y) * width + x) * 3 + c`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const CHANNELS: usize = 3;

pub type Rgb = [u8; 3];

/// A 3-channel frame stack with samples of type `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Volume<T> {
    width: usize,
    height: usize,
    depth: usize,
    data: Vec<T>,
}

/// 8-bit volume, the in-memory currency of the pipeline.
pub type VolumeTensor = Volume<u8>;

/// Real-valued volume produced by filtering and held until thresholding.
pub type FilteredVolume = Volume<f64>;

impl<T: Copy> Volume<T> {
    pub fn new(width: usize, height: usize, depth: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidVolume { reason: "width and height must be at least 1" });
        }
        if depth == 0 {
            return Err(Error::EmptyVolume);
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(depth))
            .and_then(|n| n.checked_mul(CHANNELS))
            .ok_or(Error::InvalidVolume { reason: "dimensions overflow" })?;
        if data.len() != expected {
            return Err(Error::InvalidVolume { reason: "data length != width*height*depth*3" });
        }
        Ok(Self { width, height, depth, data })
    }

    pub fn filled(width: usize, height: usize, depth: usize, value: [T; 3]) -> Result<Self> {
        let n = width * height * depth;
        let mut data = Vec::with_capacity(n * CHANNELS);
        for _ in 0..n {
            data.extend_from_slice(&value);
        }
        Self::new(width, height, depth, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `(width, height, depth)`.
    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.depth)
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn frame_len(&self) -> usize {
        self.width * self.height * CHANNELS
    }

    /// Index of the first channel of voxel `(x, y, z)`.
    #[inline]
    pub fn offset(&self, x: usize, y: usize, z: usize) -> usize {
        ((z * self.height + y) * self.width + x) * CHANNELS
    }

    #[inline]
    pub fn voxel(&self, x: usize, y: usize, z: usize) -> [T; 3] {
        let o = self.offset(x, y, z);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    #[inline]
    pub fn set_voxel(&mut self, x: usize, y: usize, z: usize, value: [T; 3]) {
        let o = self.offset(x, y, z);
        self.data[o..o + CHANNELS].copy_from_slice(&value);
    }

    pub fn frame(&self, z: usize) -> &[T] {
        let n = self.frame_len();
        &self.data[z * n..(z + 1) * n]
    }

    pub fn frame_mut(&mut self, z: usize) -> &mut [T] {
        let n = self.frame_len();
        &mut self.data[z * n..(z + 1) * n]
    }

    /// Keeps only the frames at `indices`, in the given order.
    pub fn select_frames(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.frame_len());
        for &z in indices {
            data.extend_from_slice(self.frame(z));
        }
        Self::new(self.width, self.height, indices.len(), data)
    }

    /// Returns the stack with frame order reversed along depth.
    pub fn reversed(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for z in (0..self.depth).rev() {
            data.extend_from_slice(self.frame(z));
        }
        Self { data, ..*self }
    }
}

impl VolumeTensor {
    /// Widens the samples to `f64` without rescaling.
    pub fn to_filtered(&self) -> FilteredVolume {
        Volume {
            width: self.width,
            height: self.height,
            depth: self.depth,
            data: self.data.iter().map(|&v| f64::from(v)).collect(),
        }
    }
}

impl FilteredVolume {
    /// Clamps to `[0, 255]` and rounds half away from zero.
    pub fn quantize(&self) -> VolumeTensor {
        Volume {
            width: self.width,
            height: self.height,
            depth: self.depth,
            data: self.data.iter().map(|&v| quantize_sample(v)).collect(),
        }
    }
}

#[inline]
pub(crate) fn quantize_sample(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    libm::round(v.clamp(0.0, 255.0)) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_wrong_length() {
        assert!(matches!(
            VolumeTensor::new(2, 2, 1, vec![0; 11]),
            Err(Error::InvalidVolume { .. })
        ));
        assert_eq!(VolumeTensor::new(2, 2, 0, vec![]), Err(Error::EmptyVolume));
    }

    #[test]
    fn layout_is_frame_major_row_major_interleaved() {
        let data: Vec<u8> = (0..2 * 3 * 2 * 3).map(|v| v as u8).collect();
        let v = VolumeTensor::new(2, 3, 2, data).unwrap();
        assert_eq!(v.voxel(1, 2, 1), [33, 34, 35]);
        assert_eq!(v.offset(1, 0, 0), 3);
        assert_eq!(v.frame(1)[0], 18);
    }

    #[test]
    fn quantize_rounds_half_away_and_clamps() {
        let f = FilteredVolume::new(1, 1, 1, vec![-3.0, 2.5, 300.0]).unwrap();
        assert_eq!(f.quantize().data(), &[0, 3, 255]);
    }

    #[test]
    fn reversed_swaps_frames() {
        let v = VolumeTensor::new(1, 1, 2, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(v.reversed().data(), &[4, 5, 6, 1, 2, 3]);
    }
}
