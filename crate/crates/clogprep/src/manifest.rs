//! Dataset manifests and stratified train/val/test assignment.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use clogprep_core::Label;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
    Unassigned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub id: String,
    /// Frame directory or `.cvol` file, relative to the manifest's directory
    /// unless absolute.
    pub path: String,
    pub label: Label,
    pub num_frames: usize,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleManifest {
    pub seed: u64,
    pub samples: Vec<SampleRecord>,
}

impl SampleManifest {
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for s in &self.samples {
            if !seen.insert(s.id.as_str()) {
                return Err(Error::DuplicateId(s.id.clone()));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        let m: Self = serde_json::from_str(&text).map_err(Error::json(path))?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(Error::json(path))?;
        text.push('\n');
        fs::write(path, text).map_err(Error::io(path))
    }

    pub fn in_split(&self, split: Split) -> impl Iterator<Item = &SampleRecord> {
        self.samples.iter().filter(move |s| s.split == split)
    }
}

/// Resolves a record path against the directory holding the manifest.
pub fn resolve_sample_path(manifest_path: &Path, record: &SampleRecord) -> PathBuf {
    let p = Path::new(&record.path);
    if p.is_absolute() {
        p.to_owned()
    } else {
        manifest_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// Shuffles each class with a seeded RNG and assigns the first
/// `floor(0.75 n)` records to train, the next `floor(0.15 n)` to val and the
/// rest to test. Classes are processed stalled first, then flowing, from one
/// RNG stream; record order in the manifest is preserved.
pub fn assign_splits(m: &SampleManifest, seed: u64) -> Result<SampleManifest> {
    if m.samples.is_empty() {
        return Err(Error::EmptyManifest);
    }
    m.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = m.clone();
    out.seed = seed;
    for label in [Label::Stalled, Label::Flowing] {
        let mut members: Vec<usize> =
            (0..m.samples.len()).filter(|&i| m.samples[i].label == label).collect();
        shuffle(&mut members, &mut rng);
        let n = members.len();
        let (train, val) = (75 * n / 100, 15 * n / 100);
        for (rank, &i) in members.iter().enumerate() {
            out.samples[i].split = if rank < train {
                Split::Train
            } else if rank < train + val {
                Split::Val
            } else {
                Split::Test
            };
        }
    }
    Ok(out)
}

/// Fisher-Yates driven directly by the ChaCha stream so the permutation does
/// not depend on `rand`'s sampling internals.
fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}
