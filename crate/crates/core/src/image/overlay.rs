use alloc::vec::Vec;

use super::{normalize_heatmap, BoundingBox, GrayImage, Heatmap};
use crate::math::{abs, round};
use crate::{Error, Result};

/// Outline color for boxes.
pub const BOX_COLOR: [u8; 3] = [0, 255, 0];

/// Heatmap opacity at full activation.
const MAX_ALPHA: f64 = 0.5;

/// Interleaved 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

fn jet(t: f64) -> [f64; 3] {
    let ch = |c: f64| (1.5 - abs(4.0 * t - c)).clamp(0.0, 1.0) * 255.0;
    [ch(3.0), ch(2.0), ch(1.0)]
}

/// Blends a heatmap already on `[0, 255]` over the image and outlines the
/// boxes. The image is displayed by clamping intensities onto `[0, 255]`.
/// Opacity scales with activation, so a zero heatmap leaves the image as is.
pub fn render_overlay_normalized(img: &GrayImage, heat: &GrayImage, boxes: &[BoundingBox]) -> Result<RgbImage> {
    let (w, h) = (img.width(), img.height());
    if heat.width() != w || heat.height() != h {
        return Err(Error::input("heatmap and image dimensions differ"));
    }
    if let Some(b) = boxes.iter().find(|b| !b.fits(w, h)) {
        return Err(Error::input(alloc::format!("box {b:?} exceeds image bounds")));
    }
    let mut data = Vec::with_capacity(3 * w * h);
    for (&v, &a) in img.pixels().iter().zip(heat.pixels()) {
        let base = round(v).clamp(0.0, 255.0);
        let t = (a / 255.0).clamp(0.0, 1.0);
        let alpha = MAX_ALPHA * t;
        for c in jet(t) {
            data.push(round((1.0 - alpha) * base + alpha * c) as u8);
        }
    }
    let mut out = RgbImage { width: w, height: h, data };
    for b in boxes {
        let (r, bt) = (b.right() - 1, b.bottom() - 1);
        for x in b.x..=r {
            paint(&mut out, x, b.y);
            paint(&mut out, x, bt);
        }
        for y in b.y..=bt {
            paint(&mut out, b.x, y);
            paint(&mut out, r, y);
        }
    }
    Ok(out)
}

fn paint(img: &mut RgbImage, x: usize, y: usize) {
    let i = 3 * (y * img.width + x);
    img.data[i..i + 3].copy_from_slice(&BOX_COLOR);
}

/// Normalizes the heatmap and renders it with [`render_overlay_normalized`].
pub fn render_overlay(img: &GrayImage, h: &Heatmap, boxes: &[BoundingBox]) -> Result<RgbImage> {
    render_overlay_normalized(img, &normalize_heatmap(h), boxes)
}
