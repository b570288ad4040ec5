//! Raster types and the heatmap-to-box pipeline.
//!
//! A class activation heatmap is min-max normalized onto `[0, 255]`,
//! binarized at each configured threshold, split into connected regions and
//! each region is covered by its tight axis-aligned box. Boxes keep the
//! threshold that produced them.

mod components;
mod maskgen;
mod overlay;

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use components::{boxes_from_components, component_regions, connected_components, Connectivity};
pub(crate) use components::label_regions;
pub use maskgen::{
    boxes_from_normalized, generate_bboxes, normalize_heatmap, threshold_binary, BoxGenConfig,
    TaggedBox, DEFAULT_THRESHOLDS,
};
pub use overlay::{render_overlay, render_overlay_normalized, RgbImage, BOX_COLOR};

/// Row-major scalar intensity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::mismatch("image pixels", width * height, pixels.len()));
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("image contains non-finite intensities"));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Returns a copy with `f` applied to every intensity.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.width, self.height, self.pixels.iter().map(|&v| f(v)).collect())
    }
}

/// Binary region of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RoiMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if bits.len() != width * height {
            return Err(Error::mismatch("mask bits", width * height, bits.len()));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn full(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    /// Mask whose set pixels are exactly the pixels covered by `bbox`.
    pub fn from_box(width: usize, height: usize, bbox: &BoundingBox) -> Result<Self> {
        if !bbox.fits(width, height) {
            return Err(Error::input("bounding box exceeds mask bounds"));
        }
        let mut mask = Self::empty(width, height)?;
        for y in bbox.y..bbox.bottom() {
            for x in bbox.x..bbox.right() {
                mask.set(x, y, true);
            }
        }
        Ok(mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// `(x, y)` of every set pixel in raster order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    pub fn is_subset_of(&self, other: &RoiMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub(crate) fn matches(&self, img: &GrayImage) -> Result<()> {
        if self.width != img.width || self.height != img.height {
            return Err(Error::input("mask and image dimensions differ"));
        }
        Ok(())
    }
}

/// Axis-aligned pixel rectangle; `(x, y)` is the top-left pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundingBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BoundingBox {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Result<Self> {
        if w == 0 || h == 0 {
            return Err(Error::input("bounding box must have positive width and height"));
        }
        Ok(Self { x, y, w, h })
    }

    /// One past the rightmost column.
    pub fn right(&self) -> usize {
        self.x + self.w
    }

    /// One past the bottom row.
    pub fn bottom(&self) -> usize {
        self.y + self.h
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.w >= 1 && self.h >= 1 && self.right() <= width && self.bottom() <= height
    }

    pub fn contains_point(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    pub fn contains_box(&self, other: &BoundingBox) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }
}

/// Class activation map for a single disease class.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    class_id: usize,
}

impl Heatmap {
    pub fn new(width: usize, height: usize, values: Vec<f64>, class_id: usize) -> Result<Self> {
        check_dims(width, height)?;
        if values.len() != width * height {
            return Err(Error::mismatch("heatmap values", width * height, values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("heatmap contains non-finite values"));
        }
        Ok(Self {
            width,
            height,
            values,
            class_id,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::input("raster dimensions must be at least 1x1"));
    }
    Ok(())
}
