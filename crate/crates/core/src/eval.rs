//! Classification and localization metrics.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::image::BoundingBox;
use crate::{Error, Result};

/// Label names of the 14-class chest X-ray label space, indexed by class id.
pub const NIH_CLASSES: [&str; 14] = [
    "Atelectasis",
    "Cardiomegaly",
    "Consolidation",
    "Edema",
    "Effusion",
    "Emphysema",
    "Fibrosis",
    "Hernia",
    "Infiltration",
    "Mass",
    "Nodule",
    "Pleural_Thickening",
    "Pneumonia",
    "Pneumothorax",
];

/// The eight classes that carry ground-truth boxes, in report column order.
pub const LOCALIZATION_CLASSES: [usize; 8] = [0, 1, 4, 8, 9, 10, 12, 13];

/// Display name for a class id.
pub fn class_name(class_id: usize) -> String {
    match NIH_CLASSES.get(class_id) {
        Some(n) => String::from(*n),
        None => alloc::format!("class_{class_id}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSample {
    pub image_id: String,
    pub class_id: usize,
    pub score: f64,
    pub label: u8,
}

/// Area under the ROC curve as the Mann-Whitney statistic,
/// `P(score+ > score-) + P(score+ == score-) / 2`, from mid-ranks.
pub fn roc_auc_scores(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::mismatch("labels", scores.len(), labels.len()));
    }
    if scores.iter().any(|s| !s.is_finite()) || labels.iter().any(|&l| l > 1) {
        return Err(Error::input("scores must be finite and labels binary"));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric(String::from(
            "ROC AUC needs at least one positive and one negative sample",
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut pos_rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end share their average
        let mid_rank = (start + end + 1) as f64 / 2.0;
        let positives = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        pos_rank_sum += mid_rank * positives as f64;
        start = end;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// ROC AUC over all samples, ignoring their class ids.
pub fn roc_auc(samples: &[ScoredSample]) -> Result<f64> {
    let scores: Vec<f64> = samples.iter().map(|s| s.score).collect();
    let labels: Vec<u8> = samples.iter().map(|s| s.label).collect();
    roc_auc_scores(&scores, &labels)
}

/// ROC AUC per class id, in ascending class order.
pub fn per_class_auc(samples: &[ScoredSample]) -> Vec<(usize, Result<f64>)> {
    let mut by_class: BTreeMap<usize, (Vec<f64>, Vec<u8>)> = BTreeMap::new();
    for s in samples {
        let e = by_class.entry(s.class_id).or_default();
        e.0.push(s.score);
        e.1.push(s.label);
    }
    by_class
        .into_iter()
        .map(|(c, (scores, labels))| (c, roc_auc_scores(&scores, &labels)))
        .collect()
}

/// Intersection over union of the pixel areas of two boxes.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let iw = a.right().min(b.right()).saturating_sub(a.x.max(b.x));
    let ih = a.bottom().min(b.bottom()).saturating_sub(a.y.max(b.y));
    let inter = iw * ih;
    let union = a.area() + b.area() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// One ground-truth box and the boxes predicted for the same image and class.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationCase {
    pub image_id: String,
    pub class_id: usize,
    pub ground_truth: BoundingBox,
    pub predictions: Vec<BoundingBox>,
}

impl LocalizationCase {
    /// Correct when any prediction reaches `t_iou` against the ground truth.
    pub fn is_correct(&self, t_iou: f64) -> bool {
        self.predictions.iter().any(|p| iou(p, &self.ground_truth) >= t_iou)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationAccuracy {
    pub t_iou: f64,
    pub classes: Vec<usize>,
    /// Fraction of correct cases per class; `None` when a class has no cases.
    pub per_class: Vec<Option<f64>>,
    pub counts: Vec<usize>,
    /// Mean over the classes that have cases.
    pub mean: f64,
}

fn check_iou_threshold(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::config("IoU threshold must lie in (0, 1]"));
    }
    Ok(())
}

/// Per-class fraction of correctly localized cases at `t_iou`. Cases whose
/// class is not listed in `classes` are ignored.
pub fn localization_accuracy(cases: &[LocalizationCase], t_iou: f64, classes: &[usize]) -> Result<LocalizationAccuracy> {
    check_iou_threshold(t_iou)?;
    let mut correct = alloc::vec![0usize; classes.len()];
    let mut counts = alloc::vec![0usize; classes.len()];
    for case in cases {
        if let Some(slot) = classes.iter().position(|&c| c == case.class_id) {
            counts[slot] += 1;
            if case.is_correct(t_iou) {
                correct[slot] += 1;
            }
        }
    }
    let per_class: Vec<Option<f64>> = correct
        .iter()
        .zip(&counts)
        .map(|(&k, &n)| (n > 0).then(|| k as f64 / n as f64))
        .collect();
    let present: Vec<f64> = per_class.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(Error::UndefinedMetric(String::from("no localization cases for the evaluated classes")));
    }
    let mean = present.iter().sum::<f64>() / present.len() as f64;
    Ok(LocalizationAccuracy {
        t_iou,
        classes: classes.to_vec(),
        per_class,
        counts,
        mean,
    })
}

/// IoU thresholds `0.1, 0.2, ..., 0.7`.
pub fn default_iou_thresholds() -> Vec<f64> {
    (1..=7).map(|k| k as f64 / 10.0).collect()
}

/// Accuracy table, one row per IoU threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub classes: Vec<usize>,
    pub rows: Vec<LocalizationAccuracy>,
}

pub fn sweep_report(cases: &[LocalizationCase], thresholds: &[f64], classes: &[usize]) -> Result<SweepReport> {
    if thresholds.is_empty() {
        return Err(Error::config("at least one IoU threshold is required"));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("IoU thresholds must be strictly ascending"));
    }
    let rows = thresholds
        .iter()
        .map(|&t| localization_accuracy(cases, t, classes))
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        classes: classes.to_vec(),
        rows,
    })
}
