//! Synthetic labeled vessel volumes.
//!
//! A single bright tube runs along z inside an orange rectangular overlay.
//! Flowing samples keep the tube in every frame; stalled samples drop it over
//! one contiguous run of frames. Every byte is a function of the config seed.

use core::f64::consts::TAU;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::Label;
use crate::roi::{BBox, RoiMask};
use crate::threshold::BinaryMask3D;
use crate::volume::{Rgb, VolumeTensor};

pub const OVERLAY_ORANGE: Rgb = [255, 140, 0];
pub const TUBE_LEVEL: f64 = 220.0;
pub const BACKGROUND_LEVEL: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub width: usize,
    pub height: usize,
    pub depth: usize,
    pub tube_radius: f64,
    /// Frames without tube in a stalled sample.
    pub gap_length: usize,
    /// Per-channel Gaussian noise, in 8-bit units.
    pub noise_std: f64,
    /// Amplitude of the centerline's sinusoidal x drift (y drifts by half).
    pub curvature: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            width: 160,
            height: 120,
            depth: 40,
            tube_radius: 4.0,
            gap_length: 6,
            noise_std: 10.0,
            curvature: 8.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width < 8 || self.height < 8 {
            return Err(Error::BadSynthConfig { reason: "frames must be at least 8x8" });
        }
        if self.depth == 0 {
            return Err(Error::BadSynthConfig { reason: "depth must be at least 1" });
        }
        if !(self.tube_radius > 0.0) || !self.tube_radius.is_finite() {
            return Err(Error::BadSynthConfig { reason: "tube radius must be positive" });
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(Error::BadSynthConfig { reason: "noise_std must be non-negative" });
        }
        if !(self.curvature >= 0.0) || !self.curvature.is_finite() {
            return Err(Error::BadSynthConfig { reason: "curvature must be non-negative" });
        }
        Ok(())
    }

    /// The overlay rectangle, inset by an eighth of each frame dimension.
    pub fn roi_bbox(&self) -> BBox {
        let (mx, my) = (self.width / 8, self.height / 8);
        BBox { x_min: mx, y_min: my, x_max: self.width - 1 - mx, y_max: self.height - 1 - my }
    }
}

/// A rendered sample and its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSample {
    pub volume: VolumeTensor,
    pub ground_truth: BinaryMask3D,
    pub roi: RoiMask,
    /// `(first_frame, length)` of the removed tube run, stalled only.
    pub gap: Option<(usize, usize)>,
}

pub fn generate_sample(cfg: &SynthConfig, label: Label) -> Result<SynthSample> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bbox = cfg.roi_bbox();

    let cx = (bbox.x_min + bbox.x_max) as f64 / 2.0;
    let cy = (bbox.y_min + bbox.y_max) as f64 / 2.0;
    let (ax, ay) = (cfg.curvature, cfg.curvature / 2.0);
    let r = cfg.tube_radius;
    // The tube must stay strictly inside the overlay.
    if cx - ax - r <= bbox.x_min as f64
        || cx + ax + r >= bbox.x_max as f64
        || cy - ay - r <= bbox.y_min as f64
        || cy + ay + r >= bbox.y_max as f64
    {
        return Err(Error::TubeOutOfBounds);
    }
    let phase_x = unit(&mut rng) * TAU;
    let phase_y = unit(&mut rng) * TAU;

    let gap = match label {
        Label::Flowing => None,
        Label::Stalled => {
            if cfg.gap_length == 0 {
                return Err(Error::BadSynthConfig { reason: "stalled samples need gap_length >= 1" });
            }
            if cfg.gap_length + 2 > cfg.depth {
                return Err(Error::BadSynthConfig { reason: "gap must leave tube frames on both sides" });
            }
            let free = cfg.depth - cfg.gap_length;
            let lo = (free / 4).max(1);
            let hi = (3 * free / 4).clamp(lo, free - 1);
            let start = lo + (rng.next_u64() % (hi - lo + 1) as u64) as usize;
            Some((start, cfg.gap_length))
        }
    };
    let in_gap = |z: usize| gap.is_some_and(|(s, n)| (s..s + n).contains(&z));

    let (w, h, d) = (cfg.width, cfg.height, cfg.depth);
    let mut volume = VolumeTensor::filled(w, h, d, [0, 0, 0])?;
    let mut truth = BinaryMask3D::empty(w, h, d);
    let mut normal = Normal::default();
    for z in 0..d {
        let t = TAU * z as f64 / d as f64;
        let tx = cx + ax * libm::sin(t + phase_x);
        let ty = cy + ay * libm::sin(t + phase_y);
        let tube_here = !in_gap(z);
        for y in 0..h {
            for x in 0..w {
                let (dx, dy) = (x as f64 - tx, y as f64 - ty);
                let on_tube = tube_here && dx * dx + dy * dy <= r * r;
                let base = if on_tube { TUBE_LEVEL } else { BACKGROUND_LEVEL };
                let mut px = [0u8; 3];
                for c in &mut px {
                    let v = base + cfg.noise_std * normal.sample(&mut rng);
                    *c = libm::round(v.clamp(0.0, 255.0)) as u8;
                }
                volume.set_voxel(x, y, z, px);
                if on_tube {
                    truth.set(x, y, z, true);
                }
            }
        }
        for x in bbox.x_min..=bbox.x_max {
            volume.set_voxel(x, bbox.y_min, z, OVERLAY_ORANGE);
            volume.set_voxel(x, bbox.y_max, z, OVERLAY_ORANGE);
        }
        for y in bbox.y_min..=bbox.y_max {
            volume.set_voxel(bbox.x_min, y, z, OVERLAY_ORANGE);
            volume.set_voxel(bbox.x_max, y, z, OVERLAY_ORANGE);
        }
    }

    let roi_pixels = (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            (bbox.x_min..=bbox.x_max).contains(&x) && (bbox.y_min..=bbox.y_max).contains(&y)
        })
        .collect();
    let roi = RoiMask::from_pixels(w, h, roi_pixels)?;
    Ok(SynthSample { volume, ground_truth: truth, roi, gap })
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box-Muller standard normal source, caching the second variate.
#[derive(Default)]
struct Normal {
    spare: Option<f64>,
}

impl Normal {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let u1 = 1.0 - unit(rng);
        let u2 = unit(rng);
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let (s, c) = libm::sincos(TAU * u2);
        self.spare = Some(radius * s);
        radius * c
    }
}

/// Length of the longest run of consecutive frames with no foreground voxel,
/// counted only between the first and last non-empty frames.
pub fn longest_interior_gap(mask: &BinaryMask3D) -> usize {
    let (w, h, d) = mask.dims();
    let occupied: alloc::vec::Vec<bool> = (0..d)
        .map(|z| mask.bits()[z * w * h..(z + 1) * w * h].iter().any(|&b| b))
        .collect();
    let (Some(first), Some(last)) =
        (occupied.iter().position(|&o| o), occupied.iter().rposition(|&o| o))
    else {
        return 0;
    };
    let mut best = 0;
    let mut run = 0;
    for &o in &occupied[first..=last] {
        run = if o { 0 } else { run + 1 };
        best = best.max(run);
    }
    best
}

/// True if every frame holds foreground and each consecutive frame pair
/// shares at least one `(x, y)` column.
pub fn is_z_connected(mask: &BinaryMask3D) -> bool {
    let (w, h, d) = mask.dims();
    let frame = |z: usize| &mask.bits()[z * w * h..(z + 1) * w * h];
    (0..d).all(|z| frame(z).iter().any(|&b| b))
        && (1..d).all(|z| frame(z - 1).iter().zip(frame(z)).any(|(&a, &b)| a && b))
}
