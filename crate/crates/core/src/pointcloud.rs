//! Point-cloud representation of a foreground mask.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::threshold::BinaryMask3D;
use crate::volume::{Rgb, Volume, VolumeTensor};

/// Integer voxel coordinate `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Point {
    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Self { x, y, z }
    }

    /// Key for the `(z, y, x)` lexicographic order clouds are kept in.
    #[inline]
    pub fn zyx(&self) -> (u32, u32, u32) {
        (self.z, self.y, self.x)
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> u64 {
        let d = |a: u32, b: u32| u64::from(a.abs_diff(b)).pow(2);
        d(self.x, other.x) + d(self.y, other.y) + d(self.z, other.z)
    }
}

/// Foreground voxels with their colors. Points are unique and sorted by
/// `(z, y, x)`; `n_prime` is the sampled depth they were taken from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloudSample {
    points: Vec<Point>,
    colors: Vec<Rgb>,
    source_dims: (usize, usize, usize),
    n_prime: usize,
}

impl PointCloudSample {
    /// Sorts the input by `(z, y, x)`; rejects duplicates and out-of-range
    /// coordinates.
    pub fn new(
        mut entries: Vec<(Point, Rgb)>,
        source_dims: (usize, usize, usize),
    ) -> Result<Self> {
        entries.sort_by_key(|(p, _)| p.zyx());
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidVolume { reason: "duplicate point in cloud" });
        }
        let (w, h, d) = source_dims;
        if entries
            .iter()
            .any(|(p, _)| p.x as usize >= w || p.y as usize >= h || p.z as usize >= d)
        {
            return Err(Error::InvalidVolume { reason: "point outside source dims" });
        }
        let (points, colors) = entries.into_iter().unzip();
        Ok(Self { points, colors, source_dims, n_prime: d })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    pub fn source_dims(&self) -> (usize, usize, usize) {
        self.source_dims
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the points whose flag is set, preserving order.
    pub fn retain_by(&self, keep: &[bool]) -> Self {
        let (points, colors) = self
            .points
            .iter()
            .zip(&self.colors)
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|((p, c), _)| (*p, *c))
            .unzip();
        Self { points, colors, ..*self }
    }

    /// Rasterizes the cloud back into a mask over `source_dims`.
    pub fn to_mask(&self) -> BinaryMask3D {
        let (w, h, d) = self.source_dims;
        let mut m = BinaryMask3D::empty(w, h, d);
        for p in &self.points {
            m.set(p.x as usize, p.y as usize, p.z as usize, true);
        }
        m
    }
}

/// Frame indices kept when reducing `depth` frames to `n_prime`:
/// `round(i * (depth - 1) / (n_prime - 1))`, or the middle frame
/// `(depth - 1) / 2` when `n_prime == 1`.
pub fn sample_indices(depth: usize, n_prime: usize) -> Result<Vec<usize>> {
    if n_prime == 0 || n_prime > depth {
        return Err(Error::BadCount { requested: n_prime, depth });
    }
    if n_prime == 1 {
        return Ok(alloc::vec![(depth - 1) / 2]);
    }
    let span = depth - 1;
    let steps = n_prime - 1;
    Ok((0..n_prime).map(|i| (2 * i * span + steps) / (2 * steps)).collect())
}

/// Uniformly samples `n_prime` frames, preserving order.
pub fn sample_frames<T: Copy>(v: &Volume<T>, n_prime: usize) -> Result<Volume<T>> {
    let indices = sample_indices(v.depth(), n_prime)?;
    v.select_frames(&indices)
}

/// One point per foreground voxel, colored from `v`.
pub fn mask_to_points(mask: &BinaryMask3D, v: &VolumeTensor) -> Result<PointCloudSample> {
    if mask.dims() != v.dims() {
        return Err(Error::DimensionMismatch { expected: v.dims(), found: mask.dims() });
    }
    let (w, h, d) = v.dims();
    let mut points = Vec::new();
    let mut colors = Vec::new();
    // Iterating z, then y, then x yields (z, y, x) order directly.
    for z in 0..d {
        for y in 0..h {
            for x in 0..w {
                if mask.get(x, y, z) {
                    points.push(Point::new(x as u32, y as u32, z as u32));
                    colors.push(v.voxel(x, y, z));
                }
            }
        }
    }
    Ok(PointCloudSample { points, colors, source_dims: (w, h, d), n_prime: d })
}

/// Keeps voxels that carry a point and sets everything else to black.
pub fn voxelize(pc: &PointCloudSample, v: &VolumeTensor) -> Result<VolumeTensor> {
    if pc.source_dims != v.dims() {
        return Err(Error::DimensionMismatch { expected: v.dims(), found: pc.source_dims });
    }
    let (w, h, d) = v.dims();
    let mut out = VolumeTensor::filled(w, h, d, [0, 0, 0])?;
    for p in &pc.points {
        let (x, y, z) = (p.x as usize, p.y as usize, p.z as usize);
        out.set_voxel(x, y, z, v.voxel(x, y, z));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sample_index_rule() {
        assert_eq!(sample_indices(10, 10).unwrap(), (0..10).collect::<Vec<_>>());
        assert_eq!(sample_indices(9, 3).unwrap(), vec![0, 4, 8]);
        assert_eq!(sample_indices(5, 1).unwrap(), vec![2]);
        // 0, 1.5 -> 2, 3
        assert_eq!(sample_indices(4, 3).unwrap(), vec![0, 2, 3]);
        assert_eq!(sample_indices(4, 32), Err(Error::BadCount { requested: 32, depth: 4 }));
        assert_eq!(sample_indices(4, 0), Err(Error::BadCount { requested: 0, depth: 4 }));
    }

    #[test]
    fn sample_frames_keeps_order() {
        let data: Vec<u8> = (0..9u8).flat_map(|z| [z, z, z]).collect();
        let v = VolumeTensor::new(1, 1, 9, data).unwrap();
        let s = sample_frames(&v, 3).unwrap();
        assert_eq!(s.data(), &[0, 0, 0, 4, 4, 4, 8, 8, 8]);
        assert_eq!(sample_frames(&v, 9).unwrap(), v);
    }

    #[test]
    fn empty_mask_gives_empty_cloud() {
        let v = VolumeTensor::filled(4, 4, 4, [1, 2, 3]).unwrap();
        let pc = mask_to_points(&BinaryMask3D::empty(4, 4, 4), &v).unwrap();
        assert!(pc.is_empty());
        assert_eq!(voxelize(&pc, &v).unwrap().data().iter().copied().max(), Some(0));
    }

    #[test]
    fn single_voxel_carries_its_color() {
        let mut v = VolumeTensor::filled(6, 6, 6, [0, 0, 0]).unwrap();
        v.set_voxel(3, 4, 5, [9, 8, 7]);
        let mut m = BinaryMask3D::empty(6, 6, 6);
        m.set(3, 4, 5, true);
        let pc = mask_to_points(&m, &v).unwrap();
        assert_eq!(pc.points(), &[Point::new(3, 4, 5)]);
        assert_eq!(pc.colors(), &[[9, 8, 7]]);
    }

    #[test]
    fn mismatched_dims() {
        let v = VolumeTensor::filled(4, 4, 4, [0, 0, 0]).unwrap();
        assert!(matches!(
            mask_to_points(&BinaryMask3D::empty(4, 4, 3), &v),
            Err(Error::DimensionMismatch { .. })
        ));
        let pc = PointCloudSample::new(vec![], (4, 4, 3)).unwrap();
        assert!(matches!(voxelize(&pc, &v), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn full_cloud_voxelizes_to_input() {
        let data: Vec<u8> = (0..2 * 2 * 2 * 3).map(|i| i as u8 + 1).collect();
        let v = VolumeTensor::new(2, 2, 2, data).unwrap();
        let m = BinaryMask3D::new(2, 2, 2, vec![true; 8]).unwrap();
        let pc = mask_to_points(&m, &v).unwrap();
        assert_eq!(voxelize(&pc, &v).unwrap(), v);
    }

    #[test]
    fn new_sorts_and_validates() {
        let pc = PointCloudSample::new(
            vec![(Point::new(0, 0, 1), [1, 1, 1]), (Point::new(1, 0, 0), [2, 2, 2])],
            (2, 2, 2),
        )
        .unwrap();
        assert_eq!(pc.points()[0], Point::new(1, 0, 0));
        assert!(PointCloudSample::new(vec![(Point::new(2, 0, 0), [0; 3])], (2, 2, 2)).is_err());
        let dup = vec![(Point::new(0, 0, 0), [0; 3]), (Point::new(0, 0, 0), [1; 3])];
        assert!(PointCloudSample::new(dup, (2, 2, 2)).is_err());
    }
}
