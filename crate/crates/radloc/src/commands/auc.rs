use std::path::Path;

use radloc_core::eval::{class_name, per_class_auc, ScoredSample};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::formats::ScoreLine;
use crate::manifest::read_jsonl;
use crate::numfmt::{csv_field, g17, to_json};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassAuc {
    pub class_id: usize,
    pub name: String,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedClass {
    pub class_id: usize,
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AucOutput {
    pub classes: Vec<ClassAuc>,
    pub mean: f64,
    pub skipped: Vec<SkippedClass>,
}

/// Per-class ROC AUC in class-id order and their unweighted mean. Classes
/// where the AUC is undefined are listed as skipped.
pub fn auc(scores_path: &Path, format: OutputFormat) -> Result<(AucOutput, String)> {
    let samples: Vec<ScoredSample> = read_jsonl::<ScoreLine>(scores_path)?
        .into_iter()
        .map(|(_, s)| s.into())
        .collect();
    let mut classes = Vec::new();
    let mut skipped = Vec::new();
    for (class_id, r) in per_class_auc(&samples) {
        match r {
            Ok(auc) => classes.push(ClassAuc {
                class_id,
                name: class_name(class_id),
                auc,
            }),
            Err(radloc_core::Error::UndefinedMetric(reason)) => skipped.push(SkippedClass {
                class_id,
                name: class_name(class_id),
                reason,
            }),
            Err(e) => return Err(Error::format(scores_path, format!("class {class_id}: {e}"))),
        }
    }
    if classes.is_empty() {
        return Err(Error::format(scores_path, "no class has both positive and negative samples"));
    }
    let mean = classes.iter().map(|c| c.auc).sum::<f64>() / classes.len() as f64;
    let out = AucOutput { classes, mean, skipped };
    let text = match format {
        OutputFormat::Json => to_json(&out) + "\n",
        OutputFormat::Csv => {
            let mut t = String::from("class,AUC\n");
            for c in &out.classes {
                t.push_str(&format!("{},{}\n", csv_field(&c.name), g17(c.auc)));
            }
            t.push_str(&format!("Mean,{}\n", g17(out.mean)));
            t
        }
    };
    Ok((out, text))
}
