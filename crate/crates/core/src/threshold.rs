//! Foreground masks: global Otsu on luminance and per-channel percentiles.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::volume::{FilteredVolume, Volume, VolumeTensor, CHANNELS};

/// Per-voxel foreground flags, `true` = vessel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask3D {
    width: usize,
    height: usize,
    depth: usize,
    bits: Vec<bool>,
}

impl BinaryMask3D {
    pub fn new(width: usize, height: usize, depth: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height * depth {
            return Err(Error::InvalidVolume { reason: "mask length != width*height*depth" });
        }
        Ok(Self { width, height, depth, bits })
    }

    pub fn empty(width: usize, height: usize, depth: usize) -> Self {
        Self { width, height, depth, bits: alloc::vec![false; width * height * depth] }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.depth)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (z * self.height + y) * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.bits[self.index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, on: bool) {
        let i = self.index(x, y, z);
        self.bits[i] = on;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// `round(0.299 R + 0.587 G + 0.114 B)` in exact integer arithmetic.
#[inline]
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let y = 299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b);
    ((y + 500) / 1000) as u8
}

/// Volumes that can be reduced to one 8-bit gray level per voxel.
pub trait GrayLevels {
    fn dims(&self) -> (usize, usize, usize);
    fn gray_levels(&self) -> Vec<u8>;
}

impl GrayLevels for VolumeTensor {
    fn dims(&self) -> (usize, usize, usize) {
        Volume::dims(self)
    }

    fn gray_levels(&self) -> Vec<u8> {
        self.data().chunks_exact(CHANNELS).map(|p| luminance(p[0], p[1], p[2])).collect()
    }
}

impl GrayLevels for FilteredVolume {
    fn dims(&self) -> (usize, usize, usize) {
        Volume::dims(self)
    }

    /// Re-quantizes each channel to 8 bits before taking luminance.
    fn gray_levels(&self) -> Vec<u8> {
        self.quantize().gray_levels()
    }
}

const OTSU_MAX_VOXELS: usize = 1 << 24;

/// Otsu threshold over the 256-bin luminance histogram.
///
/// Returns the smallest level `t` maximizing the between-class variance and
/// the mask of voxels with gray level `> t`.
pub fn otsu_threshold<V: GrayLevels>(v: &V) -> Result<(u8, BinaryMask3D)> {
    let (w, h, d) = v.dims();
    let gray = v.gray_levels();
    if gray.is_empty() {
        return Err(Error::EmptyVolume);
    }
    let mut hist = [0u64; 256];
    for &g in &gray {
        hist[usize::from(g)] += 1;
    }
    let t = otsu_from_histogram(&hist)?;
    let bits = gray.iter().map(|&g| g > t).collect();
    Ok((t, BinaryMask3D::new(w, h, d, bits)?))
}

/// Otsu level from a histogram. Between-class variance is compared exactly as
/// the rational `(n1*s0 - n0*s1)^2 / (n0*n1)`, which is proportional to
/// `ω0 ω1 (μ0 - μ1)^2` for a fixed total.
pub fn otsu_from_histogram(hist: &[u64; 256]) -> Result<u8> {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return Err(Error::EmptyVolume);
    }
    if total as usize > OTSU_MAX_VOXELS {
        return Err(Error::VolumeTooLarge { voxels: total as usize });
    }
    if let Some(only) = hist.iter().position(|&c| c == total) {
        return Err(Error::DegenerateHistogram { value: only as u8 });
    }
    let sum_total: u64 = hist.iter().enumerate().map(|(i, &c)| i as u64 * c).sum();

    let mut best_t = 0u8;
    let mut best = (0u128, 1u128);
    let (mut n0, mut s0) = (0u64, 0u64);
    for (t, &c) in hist.iter().enumerate() {
        n0 += c;
        s0 += t as u64 * c;
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s1 = sum_total - s0;
        let diff = i128::from(n1) * i128::from(s0) - i128::from(n0) * i128::from(s1);
        let num = diff.unsigned_abs().pow(2);
        let den = u128::from(n0) * u128::from(n1);
        if cmp_ratio(num, den, best.0, best.1) == Ordering::Greater {
            best = (num, den);
            best_t = t as u8;
        }
    }
    Ok(best_t)
}

/// Exact comparison of `a/b` with `c/d` by continued-fraction expansion.
fn cmp_ratio(mut a: u128, mut b: u128, mut c: u128, mut d: u128) -> Ordering {
    loop {
        let (qa, qc) = (a / b, c / d);
        if qa != qc {
            return qa.cmp(&qc);
        }
        let (ra, rc) = (a % b, c % d);
        match (ra == 0, rc == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            // ra/b vs rc/d orders the same as d/rc vs b/ra.
            (false, false) => (a, b, c, d) = (d, rc, b, ra),
        }
    }
}

/// Nearest-rank percentile per channel; a voxel is foreground iff every
/// channel exceeds its own threshold.
pub fn percentile_threshold(v: &VolumeTensor, percentiles: [f64; 3]) -> Result<BinaryMask3D> {
    if percentiles.iter().any(|&p| !(p > 0.0 && p <= 100.0)) {
        return Err(Error::BadPercentile);
    }
    let thresholds = channel_percentiles(v, percentiles);
    let (w, h, d) = v.dims();
    let bits = v
        .data()
        .chunks_exact(CHANNELS)
        .map(|p| (0..CHANNELS).all(|c| p[c] > thresholds[c]))
        .collect();
    BinaryMask3D::new(w, h, d, bits)
}

/// The value at sorted index `ceil(p/100 * count) - 1` of each channel.
pub fn channel_percentiles(v: &VolumeTensor, percentiles: [f64; 3]) -> [u8; 3] {
    let mut hist = [[0u64; 256]; CHANNELS];
    for p in v.data().chunks_exact(CHANNELS) {
        for c in 0..CHANNELS {
            hist[c][usize::from(p[c])] += 1;
        }
    }
    let count = (v.data().len() / CHANNELS) as f64;
    let mut out = [0u8; 3];
    for c in 0..CHANNELS {
        let rank = (libm::ceil(percentiles[c] * count / 100.0) as u64).max(1);
        let mut seen = 0;
        for (value, &n) in hist[c].iter().enumerate() {
            seen += n;
            if seen >= rank {
                out[c] = value as u8;
                break;
            }
        }
    }
    out
}
