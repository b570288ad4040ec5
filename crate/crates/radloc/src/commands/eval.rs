use std::path::Path;

use radloc_core::eval::{class_name, sweep_report, LocalizationCase, SweepReport, LOCALIZATION_CLASSES};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::formats::CaseLine;
use crate::manifest::read_jsonl;
use crate::numfmt::{csv_field, g17, to_json};
use crate::{Error, Result};

#[derive(Serialize)]
struct JsonRow {
    t_iou: f64,
    accuracy: Vec<Option<f64>>,
    counts: Vec<usize>,
    mean: f64,
}

#[derive(Serialize)]
struct JsonReport {
    classes: Vec<String>,
    rows: Vec<JsonRow>,
}

pub fn load_cases(path: &Path) -> Result<Vec<LocalizationCase>> {
    read_jsonl::<CaseLine>(path)?
        .into_iter()
        .map(|(line, c)| c.to_case().map_err(|e| Error::format(path, format!("line {line}: {e}"))))
        .collect()
}

/// Localization accuracy of the eight box-annotated classes and their mean
/// at each IoU threshold, one row per threshold.
pub fn eval(cases_path: &Path, thresholds: &[f64], format: OutputFormat) -> Result<(SweepReport, String)> {
    let cases = load_cases(cases_path)?;
    let report = sweep_report(&cases, thresholds, &LOCALIZATION_CLASSES)?;
    let names: Vec<String> = report.classes.iter().map(|&c| class_name(c)).collect();
    let text = match format {
        OutputFormat::Csv => {
            let mut t = String::from("T(IoU)");
            for n in &names {
                t.push(',');
                t.push_str(&csv_field(n));
            }
            t.push_str(",Mean\n");
            for row in &report.rows {
                t.push_str(&g17(row.t_iou));
                for v in &row.per_class {
                    t.push(',');
                    if let Some(v) = v {
                        t.push_str(&g17(*v));
                    }
                }
                t.push(',');
                t.push_str(&g17(row.mean));
                t.push('\n');
            }
            t
        }
        OutputFormat::Json => {
            let json = JsonReport {
                classes: names,
                rows: report
                    .rows
                    .iter()
                    .map(|r| JsonRow {
                        t_iou: r.t_iou,
                        accuracy: r.per_class.clone(),
                        counts: r.counts.clone(),
                        mean: r.mean,
                    })
                    .collect(),
            };
            to_json(&json) + "\n"
        }
    };
    Ok((report, text))
}
