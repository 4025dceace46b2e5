//! Accuracy and Matthews correlation for stalled-vessel predictions.

use crate::error::{Error, Result};

/// Sample label. `Stalled` is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Label {
    Stalled,
    Flowing,
}

pub const DEFAULT_DECISION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// Counts with stalled and flowing swapped.
    pub fn swapped_classes(&self) -> Self {
        Self { tp: self.tn, tn: self.tp, fp: self.fn_, fn_: self.fp }
    }

    /// Counts obtained by flipping every prediction.
    pub fn inverted_predictions(&self) -> Self {
        Self { tp: self.fn_, tn: self.fp, fp: self.tn, fn_: self.tp }
    }

    pub fn record(&mut self, label: Label, predicted: Label) {
        match (label, predicted) {
            (Label::Stalled, Label::Stalled) => self.tp += 1,
            (Label::Flowing, Label::Flowing) => self.tn += 1,
            (Label::Flowing, Label::Stalled) => self.fp += 1,
            (Label::Stalled, Label::Flowing) => self.fn_ += 1,
        }
    }
}

/// Tallies predictions; a score at or above `threshold` predicts stalled.
pub fn confusion(labels: &[Label], scores: &[f64], threshold: f64) -> Result<ConfusionCounts> {
    if labels.len() != scores.len() {
        return Err(Error::LengthMismatch { labels: labels.len(), scores: scores.len() });
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::BadThreshold);
    }
    let mut counts = ConfusionCounts::default();
    for (&label, &score) in labels.iter().zip(scores) {
        let predicted = if score >= threshold { Label::Stalled } else { Label::Flowing };
        counts.record(label, predicted);
    }
    Ok(counts)
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64> {
    if c.total() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok((c.tp + c.tn) as f64 / c.total() as f64)
}

/// Matthews correlation coefficient; 0 when any marginal is empty.
pub fn mcc(c: &ConfusionCounts) -> Result<f64> {
    if c.total() == 0 {
        return Err(Error::EmptyInput);
    }
    let (tp, tn, fp, fn_) = (c.tp as f64, c.tn as f64, c.fp as f64, c.fn_ as f64);
    let factors = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    if factors.contains(&0.0) {
        return Ok(0.0);
    }
    let denom = libm::sqrt(factors[0] * factors[1]) * libm::sqrt(factors[2] * factors[3]);
    Ok(((tp * tn - fp * fn_) / denom).clamp(-1.0, 1.0))
}
