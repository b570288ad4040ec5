//! Neighbouring gray tone difference matrix.

use alloc::vec;

use super::{FeatureVector, MatrixKind, QuantizedRoi, TextureMatrix};
use crate::math::abs;
use crate::{Error, Result};

/// Coarseness reported when the region has no gray-tone differences.
const MAX_COARSENESS: f64 = 1e6;

/// Row `i` holds `[n_i, s_i]`: the number of masked pixels of level `i + 1`
/// with at least one masked neighbour within Chebyshev distance `delta`, and
/// the sum over those pixels of `|level - mean neighbour level|`.
pub fn ngtdm(q: &QuantizedRoi, delta: usize) -> TextureMatrix {
    let mut m = TextureMatrix::zeros(MatrixKind::Ngtdm, q.ng() as usize, 2);
    m.delta = Some(delta);
    let d = delta as isize;
    for y in 0..q.height() {
        for x in 0..q.width() {
            let level = q.level(x, y);
            if level == 0 {
                continue;
            }
            let (mut sum, mut count) = (0u64, 0u64);
            for ny in y as isize - d..=y as isize + d {
                for nx in x as isize - d..=x as isize + d {
                    if nx == x as isize && ny == y as isize {
                        continue;
                    }
                    let l = q.level_at(nx, ny);
                    if l > 0 {
                        sum += l as u64;
                        count += 1;
                    }
                }
            }
            if count == 0 {
                continue;
            }
            let mean = sum as f64 / count as f64;
            let row = level as usize - 1;
            m.add(row, 0, 1.0);
            m.add(row, 1, abs(level as f64 - mean));
        }
    }
    m
}

/// Coarseness, contrast, busyness, complexity and strength.
pub fn ngtdm_features(m: &TextureMatrix) -> Result<FeatureVector> {
    if m.kind != MatrixKind::Ngtdm || m.cols != 2 {
        return Err(Error::input("expected an NGTDM"));
    }
    let nvp: f64 = (0..m.rows).map(|i| m.get(i, 0)).sum();
    if nvp == 0.0 {
        return FeatureVector::from_family(
            "ngtdm",
            vec![
                ("Coarseness", MAX_COARSENESS),
                ("Contrast", 0.0),
                ("Busyness", 0.0),
                ("Complexity", 0.0),
                ("Strength", 0.0),
            ],
        );
    }
    let p: alloc::vec::Vec<f64> = (0..m.rows).map(|i| m.get(i, 0) / nvp).collect();
    let s: alloc::vec::Vec<f64> = (0..m.rows).map(|i| m.get(i, 1)).collect();
    let present: alloc::vec::Vec<usize> = (0..m.rows).filter(|&i| p[i] > 0.0).collect();
    let ngp = present.len() as f64;
    let s_total: f64 = s.iter().sum();
    let ps: f64 = present.iter().map(|&i| p[i] * s[i]).sum();

    let coarseness = if ps > 0.0 { 1.0 / ps } else { MAX_COARSENESS };
    let (mut pair_sq, mut busy_den, mut complexity, mut strength_num) = (0.0, 0.0, 0.0, 0.0);
    for &i in &present {
        for &j in &present {
            let (li, lj) = ((i + 1) as f64, (j + 1) as f64);
            let d2 = (li - lj) * (li - lj);
            pair_sq += p[i] * p[j] * d2;
            busy_den += abs(li * p[i] - lj * p[j]);
            complexity += abs(li - lj) * (p[i] * s[i] + p[j] * s[j]) / (p[i] + p[j]);
            strength_num += (p[i] + p[j]) * d2;
        }
    }
    let contrast = if ngp > 1.0 {
        pair_sq / (ngp * (ngp - 1.0)) * s_total / nvp
    } else {
        0.0
    };
    let busyness = if busy_den > 0.0 { ps / busy_den } else { 0.0 };
    let strength = if s_total > 0.0 { strength_num / s_total } else { 0.0 };
    FeatureVector::from_family(
        "ngtdm",
        vec![
            ("Coarseness", coarseness),
            ("Contrast", contrast),
            ("Busyness", busyness),
            ("Complexity", complexity / nvp),
            ("Strength", strength),
        ],
    )
}
