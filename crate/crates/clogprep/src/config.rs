//! Pipeline configuration file (`config.json`).
//!
//! Every key is optional and falls back to the defaults below; unknown keys
//! are rejected.
//!
//! ```json
//! {
//!   "sentinel_rgb": [0, 0, 255],
//!   "orange_thresholds": {"r_min": 180, "r_max": 255, "g_min": 60, "g_max": 160, "b_min": 0, "b_max": 100},
//!   "sigma": 1.0,
//!   "n_prime": 32,
//!   "threshold_mode": {"mode": "otsu"},
//!   "dbscan": {"eps": 2.0, "min_pts": 8},
//!   "largest_cluster_only": false,
//!   "resize": [112, 112],
//!   "seed": 0,
//!   "workers": 1
//! }
//! ```
//!
//! The percentile baseline is selected with
//! `"threshold_mode": {"mode": "percentile", "percentiles": [90, 95, 99]}`.

use std::fs;
use std::path::Path;

use clogprep_core::dbscan::DbscanParams;
use clogprep_core::image_stream::{DEFAULT_SENTINEL, STREAM_SIZE};
use clogprep_core::pipeline::{PointCloudConfig, ThresholdMode};
use clogprep_core::roi::OrangeThresholds;
use clogprep_core::Rgb;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrangeBounds {
    pub r_min: u8,
    pub r_max: u8,
    pub g_min: u8,
    pub g_max: u8,
    pub b_min: u8,
    pub b_max: u8,
}

impl Default for OrangeBounds {
    fn default() -> Self {
        let t = OrangeThresholds::default();
        Self { r_min: t.r_min, r_max: t.r_max, g_min: t.g_min, g_max: t.g_max, b_min: t.b_min, b_max: t.b_max }
    }
}

impl From<OrangeBounds> for OrangeThresholds {
    fn from(b: OrangeBounds) -> Self {
        Self { r_min: b.r_min, r_max: b.r_max, g_min: b.g_min, g_max: b.g_max, b_min: b.b_min, b_max: b.b_max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum ThresholdSetting {
    Otsu,
    Percentile { percentiles: [f64; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbscanSetting {
    pub eps: f64,
    pub min_pts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub sentinel_rgb: Rgb,
    pub orange_thresholds: OrangeBounds,
    pub sigma: f64,
    pub n_prime: usize,
    pub threshold_mode: ThresholdSetting,
    pub dbscan: DbscanSetting,
    pub largest_cluster_only: bool,
    pub resize: [usize; 2],
    pub seed: u64,
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let db = DbscanParams::default();
        Self {
            sentinel_rgb: DEFAULT_SENTINEL,
            orange_thresholds: OrangeBounds::default(),
            sigma: 1.0,
            n_prime: 32,
            threshold_mode: ThresholdSetting::Otsu,
            dbscan: DbscanSetting { eps: db.eps, min_pts: db.min_pts },
            largest_cluster_only: false,
            resize: [STREAM_SIZE, STREAM_SIZE],
            seed: 0,
            workers: 1,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_owned()));
        let o = &self.orange_thresholds;
        if o.r_min > o.r_max || o.g_min > o.g_max || o.b_min > o.b_max {
            return bad("orange_thresholds: each min must not exceed its max");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be positive");
        }
        if self.n_prime == 0 {
            return bad("n_prime must be at least 1");
        }
        if let ThresholdSetting::Percentile { percentiles } = self.threshold_mode {
            if percentiles.iter().any(|&p| !(p > 0.0 && p <= 100.0)) {
                return bad("percentiles must lie in (0, 100]");
            }
        }
        if !(self.dbscan.eps > 0.0 && self.dbscan.eps.is_finite()) || self.dbscan.min_pts == 0 {
            return bad("dbscan needs eps > 0 and min_pts >= 1");
        }
        if self.resize != [STREAM_SIZE, STREAM_SIZE] {
            return bad("resize is fixed at [112, 112]");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        Ok(())
    }

    pub fn pointcloud(&self) -> PointCloudConfig {
        PointCloudConfig {
            orange: self.orange_thresholds.into(),
            sigma: self.sigma,
            n_prime: self.n_prime,
            threshold: match self.threshold_mode {
                ThresholdSetting::Otsu => ThresholdMode::Otsu,
                ThresholdSetting::Percentile { percentiles } => ThresholdMode::Percentile(percentiles),
            },
            dbscan: DbscanParams { eps: self.dbscan.eps, min_pts: self.dbscan.min_pts },
            largest_cluster_only: self.largest_cluster_only,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(PipelineConfig::from_json("{}").unwrap(), PipelineConfig::default());
        assert_eq!(PipelineConfig::default().pointcloud(), PointCloudConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(PipelineConfig::from_json(r#"{"sigmaa": 1.0}"#), Err(Error::Config(_))));
        assert!(matches!(
            PipelineConfig::from_json(r#"{"dbscan": {"eps": 1.0, "min_pts": 2, "x": 1}}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn percentile_mode_parses() {
        let cfg = PipelineConfig::from_json(
            r#"{"threshold_mode": {"mode": "percentile", "percentiles": [90, 95, 99]}, "largest_cluster_only": true}"#,
        )
        .unwrap();
        assert_eq!(cfg.pointcloud().threshold, ThresholdMode::Percentile([90.0, 95.0, 99.0]));
        assert!(cfg.pointcloud().largest_cluster_only);
    }

    #[test]
    fn range_checks() {
        for bad in [
            r#"{"sigma": 0}"#,
            r#"{"n_prime": 0}"#,
            r#"{"resize": [64, 64]}"#,
            r#"{"workers": 0}"#,
            r#"{"dbscan": {"eps": 0, "min_pts": 3}}"#,
            r#"{"threshold_mode": {"mode": "percentile", "percentiles": [0, 95, 99]}}"#,
            r#"{"orange_thresholds": {"r_min": 200, "r_max": 100, "g_min": 0, "g_max": 1, "b_min": 0, "b_max": 1}}"#,
        ] {
            assert!(PipelineConfig::from_json(bad).is_err(), "{bad}");
        }
    }
}
