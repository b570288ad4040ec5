use alloc::vec;
use alloc::vec::Vec;

use super::{BoundingBox, RoiMask};
use crate::{Error, Result};

/// Pixel adjacency used for region labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl Connectivity {
    pub fn from_count(n: u32) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(Error::config("connectivity must be 4 or 8")),
        }
    }

    pub fn count(self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }

    fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

/// Flood-fills every region of `active` pixels, where two adjacent active
/// pixels belong to the same region when `joins(a, b)` holds.
///
/// Regions are returned in raster order of their first pixel, which is the
/// topmost-then-leftmost pixel of the region. Pixel indices are row-major.
pub(crate) fn label_regions(
    width: usize,
    height: usize,
    connectivity: Connectivity,
    active: impl Fn(usize) -> bool,
    joins: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut seen = vec![false; width * height];
    let mut regions = Vec::new();
    let mut stack = Vec::new();
    for start in 0..width * height {
        if seen[start] || !active(start) {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut region = Vec::new();
        while let Some(p) = stack.pop() {
            region.push(p);
            let (px, py) = ((p % width) as isize, (p / width) as isize);
            for &(dx, dy) in connectivity.offsets() {
                let (nx, ny) = (px + dx, py + dy);
                if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                    continue;
                }
                let q = ny as usize * width + nx as usize;
                if !seen[q] && active(q) && joins(p, q) {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        region.sort_unstable();
        regions.push(region);
    }
    regions
}

/// Maximal connected regions of `mask` as `(x, y)` pixel lists.
pub fn component_regions(mask: &RoiMask, connectivity: Connectivity) -> Vec<Vec<(usize, usize)>> {
    let w = mask.width();
    label_regions(w, mask.height(), connectivity, |i| mask.bits()[i], |_, _| true)
        .into_iter()
        .map(|r| r.into_iter().map(|i| (i % w, i / w)).collect())
        .collect()
}

/// Splits `mask` into one mask per maximal connected region, ordered by each
/// region's topmost-then-leftmost pixel.
pub fn connected_components(mask: &RoiMask, connectivity: Connectivity) -> Vec<RoiMask> {
    let (w, h) = (mask.width(), mask.height());
    label_regions(w, h, connectivity, |i| mask.bits()[i], |_, _| true)
        .into_iter()
        .map(|region| {
            let mut bits = vec![false; w * h];
            for i in region {
                bits[i] = true;
            }
            RoiMask { width: w, height: h, bits }
        })
        .collect()
}

pub(crate) fn tight_box(pixels: impl IntoIterator<Item = (usize, usize)>) -> Option<BoundingBox> {
    let mut it = pixels.into_iter();
    let (x0, y0) = it.next()?;
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (x0, x0, y0, y0);
    for (x, y) in it {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    Some(BoundingBox {
        x: xmin,
        y: ymin,
        w: xmax - xmin + 1,
        h: ymax - ymin + 1,
    })
}

/// Minimal axis-aligned box around each region.
pub fn boxes_from_components(regions: &[RoiMask]) -> Result<Vec<BoundingBox>> {
    regions
        .iter()
        .map(|r| tight_box(r.iter_set()).ok_or_else(|| Error::input("cannot cover an empty region")))
        .collect()
}
