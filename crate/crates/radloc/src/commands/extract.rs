use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use radloc_core::image::{boxes_from_normalized, generate_bboxes, RoiMask};
use radloc_core::radiomics::{extract_all, FeatureVector};
use serde::Serialize;

use super::{run_pool, Batch, EntryError};
use crate::config::{OutputFormat, RadiomicsEcho, RunConfig};
use crate::formats::BoxRecord;
use crate::io::{read_gray, read_heatmap, read_mask, HeatmapInput};
use crate::manifest::{Manifest, ManifestEntry};
use crate::numfmt::{csv_field, g17, to_json};
use crate::{Error, Result};

/// Where the features of one record were measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Mask(PathBuf),
    Box { heatmap_path: PathBuf, bbox: BoxRecord },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractRecord {
    pub image_path: PathBuf,
    pub region: Region,
    pub features: FeatureVector,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    image_path: &'a Path,
    #[serde(skip_serializing_if = "Option::is_none")]
    mask_path: Option<&'a Path>,
    #[serde(skip_serializing_if = "Option::is_none")]
    heatmap_path: Option<&'a Path>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    bbox: Option<BoxRecord>,
    features: BTreeMap<&'a str, f64>,
    config: &'a RadiomicsEcho,
}

fn check_size(path: &Path, w: usize, h: usize, iw: usize, ih: usize) -> Result<()> {
    if (w, h) != (iw, ih) {
        return Err(Error::format(path, format!("is {w}x{h} but the image is {iw}x{ih}")));
    }
    Ok(())
}

fn process(manifest: &Manifest, entry: &ManifestEntry, cfg: &RunConfig) -> Result<Vec<ExtractRecord>> {
    if entry.mask_path.is_none() && entry.heatmap_path.is_none() {
        return Err(Error::Usage("entry needs a mask_path or a heatmap_path".into()));
    }
    let img = read_gray(&manifest.resolve(&entry.image_path))?;
    let mut out = Vec::new();
    if let Some(mp) = &entry.mask_path {
        let path = manifest.resolve(mp);
        let mask = read_mask(&path)?;
        check_size(&path, mask.width(), mask.height(), img.width(), img.height())?;
        out.push(ExtractRecord {
            image_path: entry.image_path.clone(),
            region: Region::Mask(mp.clone()),
            features: extract_all(&img, &mask, &cfg.radiomics)?,
        });
    }
    if let Some(hp) = &entry.heatmap_path {
        let path = manifest.resolve(hp);
        let heat = read_heatmap(&path)?;
        check_size(&path, heat.width(), heat.height(), img.width(), img.height())?;
        let class_id = entry.class_id.or(heat.class_id()).unwrap_or(0);
        let boxes = match &heat {
            HeatmapInput::Raw(h) => generate_bboxes(h, &cfg.boxes)?,
            HeatmapInput::Normalized(g) => boxes_from_normalized(g, &cfg.boxes)?,
        };
        for tb in &boxes {
            let mask = RoiMask::from_box(img.width(), img.height(), &tb.bbox)?;
            out.push(ExtractRecord {
                image_path: entry.image_path.clone(),
                region: Region::Box {
                    heatmap_path: hp.clone(),
                    bbox: BoxRecord::new(class_id, tb),
                },
                features: extract_all(&img, &mask, &cfg.radiomics)?,
            });
        }
    }
    Ok(out)
}

/// Radiomic features for every (entry, region) pair: the entry's mask if
/// given, and one rectangle per box generated from its heatmap.
pub fn extract(manifest: &Manifest, cfg: &RunConfig, jobs: usize) -> Result<Batch<ExtractRecord>> {
    let results = run_pool(jobs, &manifest.entries, |(_, e)| process(manifest, e, cfg))?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for ((line, entry), r) in manifest.entries.iter().zip(results) {
        match r {
            Ok(recs) => records.extend(recs),
            Err(e) => failures.push(EntryError {
                line: *line,
                image_path: entry.image_path.clone(),
                error: e.to_string(),
            }),
        }
    }
    let text = match cfg.output_format {
        OutputFormat::Json => render_json(&records, cfg),
        OutputFormat::Csv => render_csv(&records)?,
    };
    Ok(Batch {
        text,
        records,
        failures,
    })
}

fn render_json(records: &[ExtractRecord], cfg: &RunConfig) -> String {
    let echo = RadiomicsEcho::from(&cfg.radiomics);
    let mut text = String::new();
    for r in records {
        let (mask_path, heatmap_path, bbox) = match &r.region {
            Region::Mask(p) => (Some(p.as_path()), None, None),
            Region::Box { heatmap_path, bbox } => (None, Some(heatmap_path.as_path()), Some(*bbox)),
        };
        let rec = JsonRecord {
            image_path: &r.image_path,
            mask_path,
            heatmap_path,
            bbox,
            features: r.features.iter().collect(),
            config: &echo,
        };
        text.push_str(&to_json(&rec));
        text.push('\n');
    }
    text
}

fn render_csv(records: &[ExtractRecord]) -> Result<String> {
    let mut text = String::from("image_path,mask_path,heatmap_path,class_id,threshold,x,y,w,h");
    let names: Vec<&str> = records.first().map(|r| r.features.names().collect()).unwrap_or_default();
    for n in &names {
        text.push(',');
        text.push_str(&csv_field(n));
    }
    text.push('\n');
    let path_cell = |p: &Path| csv_field(&p.to_string_lossy());
    for r in records {
        if !r.features.names().eq(names.iter().copied()) {
            return Err(Error::Usage("feature records have different schemas".into()));
        }
        let mut row = vec![path_cell(&r.image_path)];
        match &r.region {
            Region::Mask(p) => {
                row.push(path_cell(p));
                row.extend(std::iter::repeat_n(String::new(), 7));
            }
            Region::Box { heatmap_path, bbox } => {
                row.push(String::new());
                row.push(path_cell(heatmap_path));
                row.push(bbox.class_id.to_string());
                row.push(g17(bbox.threshold));
                row.extend([bbox.x, bbox.y, bbox.w, bbox.h].iter().map(ToString::to_string));
            }
        }
        row.extend(r.features.values().into_iter().map(g17));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    Ok(text)
}
