//! Gray level run length matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::glszm::size_statistics;
use super::{Direction, FeatureVector, MatrixKind, QuantizedRoi, TextureMatrix};
use crate::{Error, Result};

pub(crate) const FEATURES: [&str; 7] = [
    "GrayLevelNonUniformity",
    "GrayLevelVariance",
    "LongRunEmphasis",
    "RunEntropy",
    "RunLengthNonUniformity",
    "RunPercentage",
    "ShortRunEmphasis",
];

/// Entry `(i, r)` counts maximal runs of `r + 1` consecutive masked pixels of
/// level `i + 1` along `direction`.
pub fn glrlm(q: &QuantizedRoi, direction: Direction) -> TextureMatrix {
    let (dx, dy) = direction.step();
    let mut runs: Vec<(u32, usize)> = Vec::new();
    for y in 0..q.height() {
        for x in 0..q.width() {
            let level = q.level(x, y);
            if level == 0 {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            if q.level_at(xi - dx, yi - dy) == level {
                continue;
            }
            let mut len = 1;
            while q.level_at(xi + dx * len as isize, yi + dy * len as isize) == level {
                len += 1;
            }
            runs.push((level, len));
        }
    }
    let max_len = runs.iter().map(|r| r.1).max().unwrap_or(1);
    let mut m = TextureMatrix::zeros(MatrixKind::Glrlm, q.ng() as usize, max_len);
    m.direction = Some(direction);
    for (level, len) in runs {
        m.add(level as usize - 1, len - 1, 1.0);
    }
    m
}

pub fn glrlm_features(m: &TextureMatrix) -> Result<FeatureVector> {
    if m.kind != MatrixKind::Glrlm {
        return Err(Error::input("expected a GLRLM"));
    }
    if m.is_zero() {
        return Err(Error::input("GLRLM has no runs"));
    }
    let s = size_statistics(m, |j| (j + 1) as f64);
    let pixels: f64 = (0..m.rows)
        .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j) * (j + 1) as f64)
        .sum();
    FeatureVector::from_family(
        "glrlm",
        vec![
            ("ShortRunEmphasis", s.small_emphasis),
            ("LongRunEmphasis", s.large_emphasis),
            ("GrayLevelNonUniformity", s.gray_nonuniformity),
            ("RunLengthNonUniformity", s.size_nonuniformity),
            ("RunPercentage", s.total / pixels),
            ("RunEntropy", s.entropy),
            ("GrayLevelVariance", s.gray_variance),
        ],
    )
}
