use std::path::{Path, PathBuf};

use radloc_core::image::{boxes_from_normalized, generate_bboxes, render_overlay, render_overlay_normalized, BoundingBox};
use serde::Serialize;

use super::{run_pool, Batch, EntryError};
use crate::config::{OutputFormat, RunConfig};
use crate::formats::BoxRecord;
use crate::io::{read_gray, read_heatmap, write_rgb_png, HeatmapInput};
use crate::manifest::{Manifest, ManifestEntry};
use crate::numfmt::{csv_field, g17, to_json};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskgenRecord {
    pub image_path: PathBuf,
    pub heatmap_path: PathBuf,
    pub boxes: Vec<BoxRecord>,
}

/// Overlay file name for the entry at `index`: zero-padded position plus the
/// image stem, so names never collide.
pub fn overlay_name(index: usize, image_path: &Path) -> String {
    let stem = image_path.file_stem().map_or("image".into(), |s| s.to_string_lossy());
    format!("{index:04}_{stem}.png")
}

fn process(
    manifest: &Manifest,
    index: usize,
    entry: &ManifestEntry,
    cfg: &RunConfig,
    overlay_dir: Option<&Path>,
) -> Result<MaskgenRecord> {
    let hp = entry
        .heatmap_path
        .as_ref()
        .ok_or_else(|| Error::Usage("entry has no heatmap_path".into()))?;
    let heat = read_heatmap(&manifest.resolve(hp))?;
    let class_id = entry.class_id.or(heat.class_id()).unwrap_or(0);
    let tagged = match &heat {
        HeatmapInput::Raw(h) => generate_bboxes(h, &cfg.boxes)?,
        HeatmapInput::Normalized(g) => boxes_from_normalized(g, &cfg.boxes)?,
    };
    if let Some(dir) = overlay_dir {
        let img = read_gray(&manifest.resolve(&entry.image_path))?;
        let boxes: Vec<BoundingBox> = tagged.iter().map(|t| t.bbox).collect();
        let rgb = match &heat {
            HeatmapInput::Raw(h) => render_overlay(&img, h, &boxes)?,
            HeatmapInput::Normalized(g) => render_overlay_normalized(&img, g, &boxes)?,
        };
        write_rgb_png(&dir.join(overlay_name(index, &entry.image_path)), &rgb)?;
    }
    Ok(MaskgenRecord {
        image_path: entry.image_path.clone(),
        heatmap_path: hp.clone(),
        boxes: tagged.iter().map(|t| BoxRecord::new(class_id, t)).collect(),
    })
}

/// Tagged boxes for every entry's heatmap, with optional overlay PNGs.
pub fn maskgen(manifest: &Manifest, cfg: &RunConfig, jobs: usize, overlay_dir: Option<&Path>) -> Result<Batch<MaskgenRecord>> {
    let indexed: Vec<(usize, &ManifestEntry)> = manifest.entries.iter().map(|(_, e)| e).enumerate().collect();
    let results = run_pool(jobs, &indexed, |&(i, e)| process(manifest, i, e, cfg, overlay_dir))?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for ((line, entry), r) in manifest.entries.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(EntryError {
                line: *line,
                image_path: entry.image_path.clone(),
                error: e.to_string(),
            }),
        }
    }
    let text = match cfg.output_format {
        OutputFormat::Json => records.iter().map(|r| to_json(r) + "\n").collect(),
        OutputFormat::Csv => {
            let mut t = String::from("image_path,heatmap_path,class_id,threshold,x,y,w,h\n");
            for r in &records {
                for b in &r.boxes {
                    t.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        csv_field(&r.image_path.to_string_lossy()),
                        csv_field(&r.heatmap_path.to_string_lossy()),
                        b.class_id,
                        g17(b.threshold),
                        b.x,
                        b.y,
                        b.w,
                        b.h
                    ));
                }
            }
            t
        }
    };
    Ok(Batch {
        text,
        records,
        failures,
    })
}
