//! Separable 3D Gaussian low-pass filter.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::volume::{FilteredVolume, VolumeTensor, CHANNELS};

/// Normalized 1D kernel with radius `ceil(3σ)`; index `radius` is the center.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::BadSigma);
    }
    let radius = libm::ceil(3.0 * sigma) as isize;
    let denom = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| libm::exp(-((i * i) as f64) / denom))
        .collect();
    let sum: f64 = k.iter().sum();
    for w in &mut k {
        *w /= sum;
    }
    Ok(k)
}

/// Filters each channel along x, then y, then z with replicate borders.
pub fn gaussian_lpf_3d(v: &VolumeTensor, sigma: f64) -> Result<FilteredVolume> {
    let kernel = gaussian_kernel(sigma)?;
    let mut vol = v.to_filtered();
    let (w, h, d) = vol.dims();
    let strides = [CHANNELS, w * CHANNELS, w * h * CHANNELS];
    for (axis, &len) in [w, h, d].iter().enumerate() {
        if len > 1 {
            convolve_axis(vol.data_mut(), (w, h, d), axis, len, strides[axis], &kernel);
        }
    }
    Ok(vol)
}

fn convolve_axis(
    data: &mut [f64],
    (w, h, d): (usize, usize, usize),
    axis: usize,
    len: usize,
    stride: usize,
    kernel: &[f64],
) {
    let radius = (kernel.len() / 2) as isize;
    let mut line = Vec::with_capacity(len);
    // Every line along `axis` starts at a base offset with zero coordinate on
    // that axis.
    let bases: Vec<usize> = match axis {
        0 => (0..d).flat_map(|z| (0..h).map(move |y| (z * h + y) * w * CHANNELS)).collect(),
        1 => (0..d).flat_map(|z| (0..w).map(move |x| (z * h * w + x) * CHANNELS)).collect(),
        _ => (0..h).flat_map(|y| (0..w).map(move |x| (y * w + x) * CHANNELS)).collect(),
    };
    for base in bases {
        for c in 0..CHANNELS {
            line.clear();
            line.extend((0..len).map(|i| data[base + i * stride + c]));
            for i in 0..len {
                let mut acc = 0.0;
                for (k, &wt) in kernel.iter().enumerate() {
                    let j = (i as isize + k as isize - radius).clamp(0, len as isize - 1) as usize;
                    acc += wt * line[j];
                }
                data[base + i * stride + c] = acc;
            }
        }
    }
}
