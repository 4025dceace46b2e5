//! Batch preprocessing of a manifest into image and point-cloud tensors.
//!
//! For each sample `<id>` the batch writes `<id>.img.cvol`, `<id>.pc.cvol` and
//! `<id>.ply` into the output directory, then a `report.json`:
//!
//! ```json
//! {
//!   "samples": [
//!     {"id": "...", "status": "ok", "outputs": {
//!        "image": {"file": "<id>.img.cvol", "sha256": "..."},
//!        "pointcloud": {"file": "<id>.pc.cvol", "sha256": "..."},
//!        "ply": {"file": "<id>.ply", "sha256": "..."}},
//!      "points": 1234, "otsu_level": 97, "warnings": []},
//!     {"id": "...", "status": "failed", "error": "..."}
//!   ],
//!   "summary": {"ok": 1, "failed": 1},
//!   "timings": {"<id>": {"millis": 12.5}}
//! }
//! ```
//!
//! `samples` is sorted by id and, together with `summary`, is a pure function
//! of the inputs and config. Wall-clock measurements live only under
//! `timings`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clogprep_core::image_stream::build_image_stream;
use clogprep_core::pipeline::build_pointcloud_stream;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::manifest::{resolve_sample_path, SampleManifest, SampleRecord};
use crate::ply::to_ply_string;
use crate::volume_io::{encode_cvol, read_volume};

pub const REPORT_NAME: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    pub image: FileDigest,
    pub pointcloud: FileDigest,
    pub ply: FileDigest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Outputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub otsu_level: Option<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub ok: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub samples: Vec<SampleReport>,
    pub summary: Summary,
    pub timings: BTreeMap<String, Timing>,
}

impl Report {
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(Error::json(path))?;
        text.push('\n');
        fs::write(path, text).map_err(Error::io(path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        serde_json::from_str(&text).map_err(Error::json(path))
    }
}

/// Runs every sample in the manifest on a pool of `workers` threads and
/// writes the report. Per-sample failures are recorded, never propagated;
/// the returned error covers only setup problems.
pub fn run_batch(manifest_path: &Path, out_dir: &Path, cfg: &PipelineConfig, workers: usize) -> Result<Report> {
    let manifest = SampleManifest::load(manifest_path)?;
    cfg.validate()?;
    fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let results: Vec<(SampleReport, f64)> = pool.install(|| {
        use rayon::prelude::*;
        manifest
            .samples
            .par_iter()
            .map(|record| {
                let start = Instant::now();
                let report = match process_sample(manifest_path, record, out_dir, cfg) {
                    Ok(r) => r,
                    Err(e) => SampleReport {
                        id: record.id.clone(),
                        status: Status::Failed,
                        outputs: None,
                        points: None,
                        otsu_level: None,
                        warnings: Vec::new(),
                        error: Some(e.to_string()),
                    },
                };
                (report, start.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    });

    let mut timings = BTreeMap::new();
    let mut samples = Vec::with_capacity(results.len());
    for (report, millis) in results {
        timings.insert(report.id.clone(), Timing { millis });
        samples.push(report);
    }
    samples.sort_by(|a, b| a.id.cmp(&b.id));
    let ok = samples.iter().filter(|s| s.status == Status::Ok).count();
    let report = Report { summary: Summary { ok, failed: samples.len() - ok }, samples, timings };
    report.save(&out_dir.join(REPORT_NAME))?;
    Ok(report)
}

fn process_sample(
    manifest_path: &Path,
    record: &SampleRecord,
    out_dir: &Path,
    cfg: &PipelineConfig,
) -> Result<SampleReport> {
    let raw = read_volume(&resolve_sample_path(manifest_path, record))?;
    if raw.depth() != record.num_frames {
        return Err(Error::FrameCount { id: record.id.clone(), expected: record.num_frames, found: raw.depth() });
    }
    let mut warnings = Vec::new();
    let orange = cfg.orange_thresholds.into();
    let image = build_image_stream(&raw, &orange, cfg.sentinel_rgb)?;
    let collisions = image.sentinel_collisions();
    if collisions > 0 {
        warnings.push(format!("SentinelCollision: {collisions} ROI voxels already held the sentinel color"));
    }
    let pc = build_pointcloud_stream(&raw, &cfg.pointcloud())?;

    let outputs = Outputs {
        image: emit(out_dir, format!("{}.img.cvol", record.id), &encode_cvol(image.volume()))?,
        pointcloud: emit(out_dir, format!("{}.pc.cvol", record.id), &encode_cvol(&pc.volume))?,
        ply: emit(out_dir, format!("{}.ply", record.id), to_ply_string(&pc.cloud).as_bytes())?,
    };
    Ok(SampleReport {
        id: record.id.clone(),
        status: Status::Ok,
        outputs: Some(outputs),
        points: Some(pc.cloud.len()),
        otsu_level: pc.level,
        warnings,
        error: None,
    })
}

fn emit(out_dir: &Path, file: String, bytes: &[u8]) -> Result<FileDigest> {
    let path: PathBuf = out_dir.join(&file);
    fs::write(&path, bytes).map_err(Error::io(&path))?;
    Ok(FileDigest { file, sha256: sha256_hex(bytes) })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
