//! Synthetic dataset generation on disk.

use std::fs;
use std::path::Path;

use clogprep_core::synth::{generate_sample, SynthConfig};
use clogprep_core::Label;

use crate::error::{Error, Result};
use crate::manifest::{SampleManifest, SampleRecord, Split};
use crate::volume_io::write_volume;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes `n_per_class` stalled and `n_per_class` flowing samples as
/// `<id>.cvol` plus `manifest.json` into `out_dir`. Sample `i` (stalled
/// first) is rendered with seed `cfg_base.seed + i`.
pub fn generate_dataset(n_per_class: usize, cfg_base: &SynthConfig, out_dir: &Path) -> Result<SampleManifest> {
    fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    let mut samples = Vec::with_capacity(2 * n_per_class);
    let jobs = [Label::Stalled, Label::Flowing]
        .into_iter()
        .flat_map(|label| (0..n_per_class).map(move |k| (label, k)));
    for (index, (label, k)) in jobs.enumerate() {
        let cfg = SynthConfig { seed: cfg_base.seed.wrapping_add(index as u64), ..*cfg_base };
        let sample = generate_sample(&cfg, label)?;
        let prefix = match label {
            Label::Stalled => "stalled",
            Label::Flowing => "flowing",
        };
        let id = format!("{prefix}_{k:04}");
        let file = format!("{id}.cvol");
        write_volume(&sample.volume, &out_dir.join(&file))?;
        samples.push(SampleRecord { id, path: file, label, num_frames: cfg.depth, split: Split::Unassigned });
    }
    let manifest = SampleManifest { seed: cfg_base.seed, samples };
    manifest.save(&out_dir.join(MANIFEST_NAME))?;
    Ok(manifest)
}
