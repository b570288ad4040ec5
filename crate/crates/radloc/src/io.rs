//! Reading grayscale rasters and heatmaps, writing overlays.

use std::fs;
use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};
use radloc_core::image::{GrayImage, Heatmap, RgbImage, RoiMask};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn decode(path: &Path) -> Result<DynamicImage> {
    let img_err = |source| Error::Image {
        path: path.to_path_buf(),
        source,
    };
    ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(img_err)
}

/// Loads an 8- or 16-bit grayscale PNG or a binary PGM. Samples keep their
/// stored integer values.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let (w, h, px): (u32, u32, Vec<f64>) = match decode(path)? {
        DynamicImage::ImageLuma8(b) => (b.width(), b.height(), b.into_raw().into_iter().map(f64::from).collect()),
        DynamicImage::ImageLuma16(b) => (b.width(), b.height(), b.into_raw().into_iter().map(f64::from).collect()),
        other => {
            return Err(Error::format(
                path,
                format!("expected a single-channel image, found {:?}", other.color()),
            ))
        }
    };
    Ok(GrayImage::new(w as usize, h as usize, px)?)
}

/// Any non-zero sample is inside the mask.
pub fn read_mask(path: &Path) -> Result<RoiMask> {
    let img = read_gray(path)?;
    let bits = img.pixels().iter().map(|&v| v != 0.0).collect();
    Ok(RoiMask::new(img.width(), img.height(), bits)?)
}

/// Sidecar describing a raw heatmap payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatmapSidecar {
    pub width: usize,
    pub height: usize,
    pub class_id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HeatmapInput {
    /// Raw activations that still need min-max normalization.
    Raw(Heatmap),
    /// An 8-bit PNG taken to be on `[0, 255]` already.
    Normalized(GrayImage),
}

impl HeatmapInput {
    pub fn width(&self) -> usize {
        match self {
            HeatmapInput::Raw(h) => h.width(),
            HeatmapInput::Normalized(g) => g.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            HeatmapInput::Raw(h) => h.height(),
            HeatmapInput::Normalized(g) => g.height(),
        }
    }

    pub fn class_id(&self) -> Option<usize> {
        match self {
            HeatmapInput::Raw(h) => Some(h.class_id()),
            HeatmapInput::Normalized(_) => None,
        }
    }
}

/// Sidecar of a raw heatmap: the payload path with a `.json` extension.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

fn is_png(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

/// `.png` files are 8-bit normalized heatmaps; anything else is a raw
/// little-endian `f32` payload described by its sidecar.
pub fn read_heatmap(path: &Path) -> Result<HeatmapInput> {
    if is_png(path) {
        return match decode(path)? {
            DynamicImage::ImageLuma8(b) => {
                let (w, h) = (b.width() as usize, b.height() as usize);
                let px = b.into_raw().into_iter().map(f64::from).collect();
                Ok(HeatmapInput::Normalized(GrayImage::new(w, h, px)?))
            }
            other => Err(Error::format(
                path,
                format!("PNG heatmaps must be 8-bit grayscale, found {:?}", other.color()),
            )),
        };
    }
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: HeatmapSidecar = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: side.clone(),
        line: 1,
        source,
    })?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = meta.width.checked_mul(meta.height).and_then(|n| n.checked_mul(4));
    if expected != Some(bytes.len()) {
        return Err(Error::format(
            path,
            format!(
                "payload has {} bytes, sidecar declares {}x{} f32 values",
                bytes.len(),
                meta.width,
                meta.height
            ),
        ));
    }
    let values = bytes
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect();
    Ok(HeatmapInput::Raw(Heatmap::new(meta.width, meta.height, values, meta.class_id)?))
}

/// Writes the payload and its sidecar. Values are narrowed to `f32`.
pub fn write_heatmap_raw(path: &Path, h: &Heatmap) -> Result<()> {
    let bytes: Vec<u8> = h.values().iter().flat_map(|&v| (v as f32).to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let meta = HeatmapSidecar {
        width: h.width(),
        height: h.height(),
        class_id: h.class_id(),
    };
    let side = sidecar_path(path);
    fs::write(&side, serde_json::to_string(&meta).expect("sidecar serializes")).map_err(|e| Error::io(&side, e))
}

pub fn write_rgb_png(path: &Path, img: &RgbImage) -> Result<()> {
    let buf = image::RgbImage::from_raw(img.width as u32, img.height as u32, img.data.clone())
        .ok_or_else(|| Error::format(path, "overlay buffer does not match its dimensions"))?;
    buf.save_with_format(path, ImageFormat::Png).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes an 8-bit grayscale PNG; samples are clamped and rounded.
pub fn write_gray_png(path: &Path, img: &GrayImage) -> Result<()> {
    let px = img.pixels().iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, px)
        .ok_or_else(|| Error::format(path, "image buffer does not match its dimensions"))?;
    buf.save_with_format(path, ImageFormat::Png).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_mask_png(path: &Path, mask: &RoiMask) -> Result<()> {
    let img = GrayImage::new(
        mask.width(),
        mask.height(),
        mask.bits().iter().map(|&b| if b { 255.0 } else { 0.0 }).collect(),
    )?;
    write_gray_png(path, &img)
}
