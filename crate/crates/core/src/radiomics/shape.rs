use alloc::vec;
use alloc::vec::Vec;

use super::FeatureVector;
use crate::image::RoiMask;
use crate::math::sqrt;
use crate::{Error, Result};

/// 2D shape descriptors of the mask.
///
/// `Perimeter` counts pixel edges shared with an unmasked pixel or the raster
/// border. `MaximumDiameter` is the largest distance between two masked pixel
/// centers. `Elongation` is `sqrt(minor / major)` of the coordinate
/// covariance eigenvalues, 1 for a single pixel.
pub fn shape_2d(mask: &RoiMask) -> Result<FeatureVector> {
    let (w, h) = (mask.width(), mask.height());
    let area = mask.count();
    if area == 0 {
        return Err(Error::input("shape features need a non-empty mask"));
    }
    let inside = |x: isize, y: isize| x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && mask.get(x as usize, y as usize);

    let mut perimeter = 0usize;
    for (x, y) in mask.iter_set() {
        let (x, y) = (x as isize, y as isize);
        perimeter += [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .filter(|(dx, dy)| !inside(x + dx, y + dy))
            .count();
    }

    let diameter = max_diameter(mask);

    let n = area as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for (x, y) in mask.iter_set() {
        mx += x as f64;
        my += y as f64;
    }
    mx /= n;
    my /= n;
    let (mut cxx, mut cyy, mut cxy) = (0.0, 0.0, 0.0);
    for (x, y) in mask.iter_set() {
        let (dx, dy) = (x as f64 - mx, y as f64 - my);
        cxx += dx * dx;
        cyy += dy * dy;
        cxy += dx * dy;
    }
    let (cxx, cyy, cxy) = (cxx / n, cyy / n, cxy / n);
    let half_tr = 0.5 * (cxx + cyy);
    let disc = sqrt(0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy);
    let (major, minor) = (half_tr + disc, (half_tr - disc).max(0.0));
    let elongation = if major > 0.0 { sqrt(minor / major) } else { 1.0 };

    let p = perimeter as f64;
    FeatureVector::from_family(
        "shape",
        vec![
            ("PixelArea", n),
            ("Perimeter", p),
            ("MaximumDiameter", diameter),
            ("Compactness", 4.0 * core::f64::consts::PI * n / (p * p)),
            ("Elongation", elongation),
        ],
    )
}

/// The farthest pair of pixel centers lies on the convex hull, and every hull
/// vertex is the leftmost or rightmost masked pixel of its row, so only those
/// candidates are compared.
fn max_diameter(mask: &RoiMask) -> f64 {
    let mut extremes: Vec<Option<(usize, usize)>> = vec![None; mask.height()];
    for (x, y) in mask.iter_set() {
        let e = extremes[y].get_or_insert((x, x));
        e.0 = e.0.min(x);
        e.1 = e.1.max(x);
    }
    let pts: Vec<(i64, i64)> = extremes
        .iter()
        .enumerate()
        .filter_map(|(y, e)| e.map(|(l, r)| [(l as i64, y as i64), (r as i64, y as i64)]))
        .flatten()
        .collect();
    let mut best = 0i64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let (dx, dy) = (a.0 - b.0, a.1 - b.1);
            best = best.max(dx * dx + dy * dy);
        }
    }
    sqrt(best as f64)
}
