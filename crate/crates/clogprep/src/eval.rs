//! Scoring predictions against the manifest's test split.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use clogprep_core::metrics::{accuracy, confusion, mcc, DEFAULT_DECISION_THRESHOLD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifest::{SampleManifest, Split};

/// Sample id → stalled probability.
pub type Predictions = BTreeMap<String, f64>;

/// Serialized as `{"acc", "mcc", "tp", "tn", "fp", "fn"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub acc: f64,
    pub mcc: f64,
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl MetricsReport {
    pub fn summary_line(&self) -> String {
        format!(
            "acc={:.4} mcc={:.4} tp={} tn={} fp={} fn={}",
            self.acc, self.mcc, self.tp, self.tn, self.fp, self.fn_
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(Error::json(path))?;
        text.push('\n');
        fs::write(path, text).map_err(Error::io(path))
    }
}

pub fn load_predictions(path: &Path) -> Result<Predictions> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(Error::json(path))
}

/// Confusion counts, accuracy and MCC over the test split only.
pub fn evaluate(predictions: &Predictions, manifest: &SampleManifest) -> Result<MetricsReport> {
    let mut labels = Vec::new();
    let mut scores = Vec::new();
    for record in manifest.in_split(Split::Test) {
        let &score = predictions
            .get(&record.id)
            .ok_or_else(|| Error::MissingPrediction(record.id.clone()))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::BadScore { id: record.id.clone(), score });
        }
        labels.push(record.label);
        scores.push(score);
    }
    let c = confusion(&labels, &scores, DEFAULT_DECISION_THRESHOLD)?;
    Ok(MetricsReport { acc: accuracy(&c)?, mcc: mcc(&c)?, tp: c.tp, tn: c.tn, fp: c.fp, fn_: c.fn_ })
}
