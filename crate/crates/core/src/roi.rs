//! Region-of-interest recovery from the orange overlay contour.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::volume::{Rgb, VolumeTensor, CHANNELS};

/// Inclusive RGB box that classifies a pixel as overlay orange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrangeThresholds {
    pub r_min: u8,
    pub r_max: u8,
    pub g_min: u8,
    pub g_max: u8,
    pub b_min: u8,
    pub b_max: u8,
}

impl Default for OrangeThresholds {
    fn default() -> Self {
        Self { r_min: 180, r_max: 255, g_min: 60, g_max: 160, b_min: 0, b_max: 100 }
    }
}

impl OrangeThresholds {
    #[inline]
    pub fn is_orange(&self, [r, g, b]: Rgb) -> bool {
        (self.r_min..=self.r_max).contains(&r)
            && (self.g_min..=self.g_max).contains(&g)
            && (self.b_min..=self.b_max).contains(&b)
    }
}

/// Inclusive pixel bounding box `(x_min, y_min, x_max, y_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BBox {
    pub x_min: usize,
    pub y_min: usize,
    pub x_max: usize,
    pub y_max: usize,
}

impl BBox {
    pub fn width(&self) -> usize {
        self.x_max - self.x_min + 1
    }

    pub fn height(&self) -> usize {
        self.y_max - self.y_min + 1
    }
}

/// Per-pixel ROI mask with its tight bounding box. Always holds at least one
/// `true` pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiMask {
    width: usize,
    height: usize,
    mask: Vec<bool>,
    bbox: BBox,
}

impl RoiMask {
    /// Builds a mask from row-major pixels, computing the tight bbox.
    pub fn from_pixels(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != width * height {
            return Err(Error::InvalidVolume { reason: "mask length != width*height" });
        }
        let bbox = tight_bbox(width, &mask).ok_or(Error::NoRoiFound)?;
        Ok(Self { width, height, mask, bbox })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn pixels(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    fn check_frame(&self, v: &VolumeTensor) -> Result<()> {
        if (v.width(), v.height()) != (self.width, self.height) {
            return Err(Error::DimensionMismatch {
                expected: (v.width(), v.height(), v.depth()),
                found: (self.width, self.height, v.depth()),
            });
        }
        Ok(())
    }
}

fn tight_bbox(width: usize, mask: &[bool]) -> Option<BBox> {
    let mut bbox: Option<BBox> = None;
    for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        let (x, y) = (i % width, i / width);
        bbox = Some(match bbox {
            None => BBox { x_min: x, y_min: y, x_max: x, y_max: y },
            Some(b) => BBox {
                x_min: b.x_min.min(x),
                y_min: b.y_min.min(y),
                x_max: b.x_max.max(x),
                y_max: b.y_max.max(y),
            },
        });
    }
    bbox
}

/// Recovers the ROI from frame 0: the largest 8-connected orange component is
/// the contour, and every pixel the border flood fill cannot reach (plus the
/// contour itself) is inside.
pub fn detect_roi(v: &VolumeTensor, thresholds: &OrangeThresholds) -> Result<RoiMask> {
    let (w, h) = (v.width(), v.height());
    let frame = v.frame(0);
    let orange: Vec<bool> = frame
        .chunks_exact(CHANNELS)
        .map(|px| thresholds.is_orange([px[0], px[1], px[2]]))
        .collect();
    if !orange.iter().any(|&o| o) {
        return Err(Error::NoRoiFound);
    }

    let contour = largest_component(w, h, &orange);

    // 4-connected fill from every non-contour border pixel.
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    let seed = |i: usize, outside: &mut [bool], queue: &mut VecDeque<usize>| {
        if !contour[i] && !outside[i] {
            outside[i] = true;
            queue.push_back(i);
        }
    };
    for x in 0..w {
        seed(x, &mut outside, &mut queue);
        seed((h - 1) * w + x, &mut outside, &mut queue);
    }
    for y in 0..h {
        seed(y * w, &mut outside, &mut queue);
        seed(y * w + w - 1, &mut outside, &mut queue);
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        if x > 0 {
            seed(i - 1, &mut outside, &mut queue);
        }
        if x + 1 < w {
            seed(i + 1, &mut outside, &mut queue);
        }
        if y > 0 {
            seed(i - w, &mut outside, &mut queue);
        }
        if y + 1 < h {
            seed(i + w, &mut outside, &mut queue);
        }
    }

    let interior = (0..w * h).any(|i| !outside[i] && !contour[i]);
    if !interior {
        return Err(Error::OpenContour);
    }
    let mask: Vec<bool> = outside.iter().map(|&o| !o).collect();
    RoiMask::from_pixels(w, h, mask)
}

/// Marks the pixels of the largest 8-connected `true` component. Ties go to
/// the component whose first pixel comes first in row-major order.
fn largest_component(w: usize, h: usize, on: &[bool]) -> Vec<bool> {
    let mut label = vec![usize::MAX; w * h];
    let mut best: Option<(usize, usize)> = None;
    let mut stack = Vec::new();
    let mut next = 0;
    for start in 0..w * h {
        if !on[start] || label[start] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut size = 0;
        label[start] = id;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if on[j] && label[j] == usize::MAX {
                        label[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
        if best.is_none_or(|(_, s)| size > s) {
            best = Some((id, size));
        }
    }
    let keep = best.map(|(id, _)| id);
    label.iter().map(|&l| Some(l) == keep).collect()
}

/// Crops every frame and the mask to the mask's bounding box.
pub fn crop_to_roi(v: &VolumeTensor, roi: &RoiMask) -> Result<(VolumeTensor, RoiMask)> {
    roi.check_frame(v)?;
    let b = roi.bbox;
    let (cw, ch) = (b.width(), b.height());
    let mut data = Vec::with_capacity(cw * ch * v.depth() * CHANNELS);
    for z in 0..v.depth() {
        for y in b.y_min..=b.y_max {
            let start = v.offset(b.x_min, y, z);
            data.extend_from_slice(&v.data()[start..start + cw * CHANNELS]);
        }
    }
    let mut mask = Vec::with_capacity(cw * ch);
    for y in b.y_min..=b.y_max {
        mask.extend_from_slice(&roi.mask[y * roi.width + b.x_min..=y * roi.width + b.x_max]);
    }
    Ok((VolumeTensor::new(cw, ch, v.depth(), data)?, RoiMask::from_pixels(cw, ch, mask)?))
}

pub(crate) fn ensure_mask_matches(v: &VolumeTensor, roi: &RoiMask) -> Result<()> {
    roi.check_frame(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORANGE: Rgb = [255, 140, 0];

    fn frame_with_rect(w: usize, h: usize, x0: usize, y0: usize, x1: usize, y1: usize) -> VolumeTensor {
        let mut v = VolumeTensor::filled(w, h, 1, [20, 20, 20]).unwrap();
        for x in x0..=x1 {
            v.set_voxel(x, y0, 0, ORANGE);
            v.set_voxel(x, y1, 0, ORANGE);
        }
        for y in y0..=y1 {
            v.set_voxel(x0, y, 0, ORANGE);
            v.set_voxel(x1, y, 0, ORANGE);
        }
        v
    }

    #[test]
    fn rectangle_outline_gives_its_bbox_and_filled_interior() {
        let v = frame_with_rect(64, 64, 10, 12, 40, 50);
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        assert_eq!(roi.bbox(), BBox { x_min: 10, y_min: 12, x_max: 40, y_max: 50 });
        for y in 0..64 {
            for x in 0..64 {
                let inside = (10..=40).contains(&x) && (12..=50).contains(&y);
                assert_eq!(roi.contains(x, y), inside, "({x},{y})");
            }
        }
    }

    #[test]
    fn no_orange_is_an_error() {
        let v = VolumeTensor::filled(8, 8, 2, [10, 200, 10]).unwrap();
        assert_eq!(detect_roi(&v, &OrangeThresholds::default()), Err(Error::NoRoiFound));
    }

    #[test]
    fn ring_on_frame_border_covers_whole_frame() {
        let v = frame_with_rect(16, 12, 0, 0, 15, 11);
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        assert_eq!(roi.bbox(), BBox { x_min: 0, y_min: 0, x_max: 15, y_max: 11 });
        assert!(roi.pixels().iter().all(|&m| m));
    }

    #[test]
    fn open_contour_is_rejected() {
        let mut v = frame_with_rect(32, 32, 5, 5, 20, 20);
        v.set_voxel(12, 5, 0, [20, 20, 20]);
        assert_eq!(detect_roi(&v, &OrangeThresholds::default()), Err(Error::OpenContour));
    }

    #[test]
    fn diagonal_contour_does_not_leak() {
        // Diamond drawn with diagonal steps only.
        let mut v = VolumeTensor::filled(21, 21, 1, [0, 0, 0]).unwrap();
        for i in 0..=5usize {
            v.set_voxel(10 + i, 5 + i, 0, ORANGE);
            v.set_voxel(10 - i, 5 + i, 0, ORANGE);
            v.set_voxel(10 + i, 15 - i, 0, ORANGE);
            v.set_voxel(10 - i, 15 - i, 0, ORANGE);
        }
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        assert!(roi.contains(10, 10));
        assert_eq!(roi.bbox(), BBox { x_min: 5, y_min: 5, x_max: 15, y_max: 15 });
    }

    #[test]
    fn largest_component_wins_over_specks() {
        let mut v = frame_with_rect(40, 40, 10, 10, 30, 30);
        v.set_voxel(2, 2, 0, ORANGE);
        v.set_voxel(3, 3, 0, ORANGE);
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        assert_eq!(roi.bbox(), BBox { x_min: 10, y_min: 10, x_max: 30, y_max: 30 });
    }

    #[test]
    fn crop_uses_inclusive_bbox() {
        let mut v = frame_with_rect(64, 64, 10, 12, 40, 50);
        let extra = v.frame(0).to_vec();
        let mut data = v.data().to_vec();
        data.extend_from_slice(&extra);
        v = VolumeTensor::new(64, 64, 2, data).unwrap();
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        let (c, m) = crop_to_roi(&v, &roi).unwrap();
        assert_eq!(c.dims(), (31, 39, 2));
        assert_eq!(m.bbox(), BBox { x_min: 0, y_min: 0, x_max: 30, y_max: 38 });
        assert_eq!(c.voxel(3, 4, 1), v.voxel(13, 16, 1));
    }

    #[test]
    fn crop_full_frame_is_identity() {
        let v = frame_with_rect(16, 12, 0, 0, 15, 11);
        let roi = detect_roi(&v, &OrangeThresholds::default()).unwrap();
        let (c, m) = crop_to_roi(&v, &roi).unwrap();
        assert_eq!(c, v);
        assert_eq!(m, roi);
    }

    #[test]
    fn crop_rejects_mismatched_mask() {
        let v = VolumeTensor::filled(64, 64, 1, [0, 0, 0]).unwrap();
        let roi = RoiMask::from_pixels(32, 32, vec![true; 32 * 32]).unwrap();
        assert!(matches!(crop_to_roi(&v, &roi), Err(Error::DimensionMismatch { .. })));
    }
}
