//! Gray level dependence matrix.

use alloc::vec;

use super::glszm::size_statistics;
use super::{FeatureVector, MatrixKind, QuantizedRoi, TextureMatrix};
use crate::{Error, Result};

/// Entry `(i, d)` counts masked pixels of level `i + 1` with exactly `d`
/// masked neighbours within Chebyshev distance `delta` whose level differs by
/// at most `alpha`. Columns span `0..(2 delta + 1)^2`.
pub fn gldm(q: &QuantizedRoi, delta: usize, alpha: u32) -> TextureMatrix {
    let side = 2 * delta + 1;
    let mut m = TextureMatrix::zeros(MatrixKind::Gldm, q.ng() as usize, side * side);
    m.delta = Some(delta);
    m.alpha = Some(alpha);
    let d = delta as isize;
    for y in 0..q.height() {
        for x in 0..q.width() {
            let level = q.level(x, y);
            if level == 0 {
                continue;
            }
            let mut dependent = 0;
            for ny in y as isize - d..=y as isize + d {
                for nx in x as isize - d..=x as isize + d {
                    if nx == x as isize && ny == y as isize {
                        continue;
                    }
                    let l = q.level_at(nx, ny);
                    if l > 0 && l.abs_diff(level) <= alpha {
                        dependent += 1;
                    }
                }
            }
            m.add(level as usize - 1, dependent, 1.0);
        }
    }
    m
}

/// Dependence statistics; emphasis weights use `d + 1` so that a pixel with
/// no dependent neighbour is well defined.
pub fn gldm_features(m: &TextureMatrix) -> Result<FeatureVector> {
    if m.kind != MatrixKind::Gldm {
        return Err(Error::input("expected a GLDM"));
    }
    if m.is_zero() {
        return Err(Error::input("GLDM is empty"));
    }
    let s = size_statistics(m, |j| (j + 1) as f64);
    FeatureVector::from_family(
        "gldm",
        vec![
            ("SmallDependenceEmphasis", s.small_emphasis),
            ("LargeDependenceEmphasis", s.large_emphasis),
            ("GrayLevelNonUniformity", s.gray_nonuniformity),
            ("DependenceNonUniformity", s.size_nonuniformity),
            ("DependenceEntropy", s.entropy),
            ("GrayLevelVariance", s.gray_variance),
        ],
    )
}
