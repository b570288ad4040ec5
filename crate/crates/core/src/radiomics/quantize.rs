use alloc::vec::Vec;

use crate::image::{GrayImage, RoiMask};
use crate::math::floor;
use crate::{Error, Result};

/// Masked region discretized into `ng` gray levels. Level 0 marks pixels
/// outside the mask; masked pixels carry levels `1..=ng`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedRoi {
    width: usize,
    height: usize,
    levels: Vec<u32>,
    ng: u32,
    count: usize,
}

impl QuantizedRoi {
    /// Wraps precomputed levels, checking the level range and that at least
    /// one pixel is masked.
    pub fn from_levels(width: usize, height: usize, levels: Vec<u32>, ng: u32) -> Result<Self> {
        if width == 0 || height == 0 || levels.len() != width * height {
            return Err(Error::mismatch("quantized levels", width * height, levels.len()));
        }
        if ng < 1 {
            return Err(Error::config("ng must be positive"));
        }
        if levels.iter().any(|&l| l > ng) {
            return Err(Error::input("level exceeds ng"));
        }
        let count = levels.iter().filter(|&&l| l > 0).count();
        if count == 0 {
            return Err(Error::input("quantized region has no masked pixels"));
        }
        Ok(Self {
            width,
            height,
            levels,
            ng,
            count,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn ng(&self) -> u32 {
        self.ng
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Number of masked pixels.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Level at `(x, y)`, 0 when unmasked.
    #[inline]
    pub fn level(&self, x: usize, y: usize) -> u32 {
        self.levels[y * self.width + x]
    }

    /// Level at a signed coordinate, 0 when outside the raster or the mask.
    #[inline]
    pub(crate) fn level_at(&self, x: isize, y: isize) -> u32 {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            0
        } else {
            self.levels[y as usize * self.width + x as usize]
        }
    }
}

/// Uniformly bins the masked intensities over `[min, max]` into `ng` levels:
/// `level = min(floor(ng * (v - min) / (max - min)) + 1, ng)`. A constant
/// region maps to level 1.
pub fn quantize(img: &GrayImage, mask: &RoiMask, ng: u32) -> Result<QuantizedRoi> {
    mask.matches(img)?;
    if ng < 1 {
        return Err(Error::config("ng must be positive"));
    }
    let masked = || img.pixels().iter().zip(mask.bits()).filter(|(_, &b)| b).map(|(&v, _)| v);
    let (lo, hi) = masked().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return Err(Error::input("mask selects no pixels"));
    }
    let span = hi - lo;
    let ngf = ng as f64;
    let levels = img
        .pixels()
        .iter()
        .zip(mask.bits())
        .map(|(&v, &b)| {
            if !b {
                0
            } else if span > 0.0 {
                (floor(ngf * (v - lo) / span) as u32 + 1).min(ng)
            } else {
                1
            }
        })
        .collect();
    QuantizedRoi::from_levels(img.width(), img.height(), levels, ng)
}
