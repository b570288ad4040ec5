use alloc::vec;
use alloc::vec::Vec;

use super::components::{label_regions, tight_box};
use super::{BoundingBox, Connectivity, GrayImage, Heatmap, RoiMask};
use crate::math::round;
use crate::{Error, Result};

/// Binarization levels applied independently to each normalized heatmap.
pub const DEFAULT_THRESHOLDS: [f64; 2] = [60.0, 180.0];

/// Parameters of the heatmap-to-box pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGenConfig {
    pub thresholds: Vec<f64>,
    pub connectivity: Connectivity,
    /// Components with fewer pixels than this are dropped.
    pub min_area: usize,
}

impl Default for BoxGenConfig {
    fn default() -> Self {
        Self {
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            connectivity: Connectivity::Eight,
            min_area: 1,
        }
    }
}

impl BoxGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() {
            return Err(Error::config("at least one threshold is required"));
        }
        for &t in &self.thresholds {
            check_threshold(t)?;
        }
        Ok(())
    }
}

/// A box together with the binarization level that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedBox {
    pub threshold: f64,
    pub bbox: BoundingBox,
}

/// Min-max rescales the heatmap onto integer levels `[0, 255]`, rounding half
/// away from zero. A constant heatmap maps to all zeros.
pub fn normalize_heatmap(h: &Heatmap) -> GrayImage {
    let values = h.values();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    let pixels = if span > 0.0 {
        values
            .iter()
            .map(|&v| round(255.0 * ((v - lo) / span)).clamp(0.0, 255.0))
            .collect()
    } else {
        vec![0.0; values.len()]
    };
    GrayImage {
        width: h.width(),
        height: h.height(),
        pixels,
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 255.0) {
        return Err(Error::config("threshold must lie strictly between 0 and 255"));
    }
    Ok(())
}

/// Sets every pixel whose intensity is at least `t`.
pub fn threshold_binary(img: &GrayImage, t: f64) -> Result<RoiMask> {
    check_threshold(t)?;
    Ok(RoiMask {
        width: img.width(),
        height: img.height(),
        bits: img.pixels().iter().map(|&v| v >= t).collect(),
    })
}

/// Runs threshold, labelling and box cover on an already normalized map.
pub fn boxes_from_normalized(normalized: &GrayImage, cfg: &BoxGenConfig) -> Result<Vec<TaggedBox>> {
    cfg.validate()?;
    let w = normalized.width();
    let mut out = Vec::new();
    for &t in &cfg.thresholds {
        let mask = threshold_binary(normalized, t)?;
        let regions = label_regions(w, mask.height(), cfg.connectivity, |i| mask.bits()[i], |_, _| true);
        for region in regions.iter().filter(|r| r.len() >= cfg.min_area) {
            let bbox = tight_box(region.iter().map(|&i| (i % w, i / w)))
                .ok_or_else(|| Error::input("labelling produced an empty region"))?;
            out.push(TaggedBox { threshold: t, bbox });
        }
    }
    Ok(out)
}

/// Full heatmap-to-box pipeline: normalize, then for each threshold
/// independently binarize, label and cover. Output is grouped by threshold in
/// configuration order.
pub fn generate_bboxes(h: &Heatmap, cfg: &BoxGenConfig) -> Result<Vec<TaggedBox>> {
    boxes_from_normalized(&normalize_heatmap(h), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    fn heat(values: Vec<f64>) -> Heatmap {
        let n = values.len();
        Heatmap::new(n, 1, values, 0).unwrap()
    }

    #[test]
    fn normalize_examples() {
        // 255 * 128 / 256 = 127.5 rounds away from zero.
        assert_eq!(normalize_heatmap(&heat(vec![0.0, 128.0, 256.0])).pixels(), &[0.0, 128.0, 255.0]);
        assert_eq!(normalize_heatmap(&heat(vec![-1.0, 1.0])).pixels(), &[0.0, 255.0]);
        assert_eq!(normalize_heatmap(&heat(vec![3.7; 5])).pixels(), &[0.0; 5]);
        assert_eq!(normalize_heatmap(&heat(vec![0.0, 1.0, 3.0])).pixels(), &[0.0, 85.0, 255.0]);
    }

    #[test]
    fn threshold_examples() {
        let img = GrayImage::new(3, 1, vec![50.0, 60.0, 200.0]).unwrap();
        assert_eq!(threshold_binary(&img, 60.0).unwrap().bits(), &[false, true, true]);
        let sat = GrayImage::new(2, 2, vec![255.0; 4]).unwrap();
        assert_eq!(threshold_binary(&sat, 60.0).unwrap().count(), 4);
        let dark = GrayImage::new(2, 2, vec![0.0; 4]).unwrap();
        assert!(threshold_binary(&dark, 60.0).unwrap().is_empty());
        for bad in [0.0, 255.0, -3.0, f64::NAN] {
            assert!(matches!(threshold_binary(&img, bad), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn constant_heatmap_yields_nothing() {
        let h = Heatmap::new(8, 8, vec![0.4; 64], 2).unwrap();
        assert!(generate_bboxes(&h, &BoxGenConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn gaussian_blob_boxes_nest() {
        let h = Heatmap::new(
            64,
            64,
            (0..64 * 64)
                .map(|i| {
                    let (x, y) = ((i % 64) as f64 - 32.0, (i / 64) as f64 - 32.0);
                    exp(-(x * x + y * y) / (2.0 * 36.0))
                })
                .collect(),
            0,
        )
        .unwrap();
        let boxes = generate_bboxes(&h, &BoxGenConfig::default()).unwrap();
        let low: Vec<_> = boxes.iter().filter(|b| b.threshold == 60.0).collect();
        let high: Vec<_> = boxes.iter().filter(|b| b.threshold == 180.0).collect();
        assert_eq!(low.len(), 1);
        assert_eq!(high.len(), 1);
        assert!(low[0].bbox.contains_point(32, 32));
        assert!(high[0].bbox.contains_point(32, 32));
        assert!(low[0].bbox.contains_box(&high[0].bbox));
    }

    #[test]
    fn min_area_filters_small_components() {
        let mut v = vec![0.0; 25];
        v[0] = 1.0;
        v[12] = 1.0;
        v[13] = 1.0;
        let h = Heatmap::new(5, 5, v, 0).unwrap();
        let cfg = BoxGenConfig {
            thresholds: vec![100.0],
            connectivity: Connectivity::Eight,
            min_area: 2,
        };
        let boxes = generate_bboxes(&h, &cfg).unwrap();
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].bbox, BoundingBox { x: 2, y: 2, w: 2, h: 1 });
    }

    #[test]
    fn empty_threshold_list_rejected() {
        let h = Heatmap::new(2, 2, vec![0.0, 1.0, 2.0, 3.0], 0).unwrap();
        let cfg = BoxGenConfig {
            thresholds: vec![],
            ..BoxGenConfig::default()
        };
        assert!(generate_bboxes(&h, &cfg).is_err());
    }
}
