//! Gray level size zone matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::{FeatureVector, MatrixKind, QuantizedRoi, TextureMatrix};
use crate::image::{label_regions, Connectivity};
use crate::math::entropy_term;
use crate::{Error, Result};

/// Entry `(i, s)` counts 8-connected zones of level `i + 1` with `s + 1` pixels.
pub fn glszm(q: &QuantizedRoi) -> TextureMatrix {
    let levels = q.levels();
    let zones = label_regions(
        q.width(),
        q.height(),
        Connectivity::Eight,
        |i| levels[i] > 0,
        |a, b| levels[a] == levels[b],
    );
    let max_size = zones.iter().map(Vec::len).max().unwrap_or(1);
    let mut m = TextureMatrix::zeros(MatrixKind::Glszm, q.ng() as usize, max_size);
    for z in &zones {
        m.add(levels[z[0]] as usize - 1, z.len() - 1, 1.0);
    }
    m
}

/// Emphasis, non-uniformity and entropy statistics shared by the zone, run
/// and dependence matrices. `size_of(j)` maps a column to its size value.
pub(crate) fn size_statistics(m: &TextureMatrix, size_of: impl Fn(usize) -> f64) -> SizeStats {
    let total = m.sum();
    let (mut small, mut large, mut entropy, mut mu) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let c = m.get(i, j);
            if c == 0.0 {
                continue;
            }
            let s = size_of(j);
            small += c / (s * s);
            large += c * s * s;
            let p = c / total;
            entropy += entropy_term(p);
            mu += (i + 1) as f64 * p;
        }
    }
    let rows = m.row_sums();
    let cols = m.col_sums();
    let mut variance = 0.0;
    for (i, r) in rows.iter().enumerate() {
        let d = (i + 1) as f64 - mu;
        variance += d * d * r / total;
    }
    SizeStats {
        total,
        small_emphasis: small / total,
        large_emphasis: large / total,
        gray_nonuniformity: rows.iter().map(|r| r * r).sum::<f64>() / total,
        size_nonuniformity: cols.iter().map(|c| c * c).sum::<f64>() / total,
        entropy,
        gray_variance: variance,
    }
}

pub(crate) struct SizeStats {
    pub total: f64,
    pub small_emphasis: f64,
    pub large_emphasis: f64,
    pub gray_nonuniformity: f64,
    pub size_nonuniformity: f64,
    pub entropy: f64,
    pub gray_variance: f64,
}

pub fn glszm_features(m: &TextureMatrix) -> Result<FeatureVector> {
    if m.kind != MatrixKind::Glszm {
        return Err(Error::input("expected a GLSZM"));
    }
    if m.is_zero() {
        return Err(Error::input("GLSZM has no zones"));
    }
    let s = size_statistics(m, |j| (j + 1) as f64);
    let pixels: f64 = (0..m.rows)
        .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j) * (j + 1) as f64)
        .sum();
    FeatureVector::from_family(
        "glszm",
        vec![
            ("SmallAreaEmphasis", s.small_emphasis),
            ("LargeAreaEmphasis", s.large_emphasis),
            ("GrayLevelNonUniformity", s.gray_nonuniformity),
            ("SizeZoneNonUniformity", s.size_nonuniformity),
            ("ZonePercentage", s.total / pixels),
            ("ZoneEntropy", s.entropy),
            ("GrayLevelVariance", s.gray_variance),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_square_is_one_zone() {
        let q = QuantizedRoi::from_levels(5, 5, vec![2; 25], 4).unwrap();
        let m = glszm(&q);
        assert_eq!(m.cols, 25);
        assert_eq!(m.get(1, 24), 1.0);
        assert_eq!(m.sum(), 1.0);
        let f = glszm_features(&m).unwrap();
        assert_eq!(f.get("glszm.ZoneEntropy"), Some(0.0));
        assert_eq!(f.get("glszm.ZonePercentage"), Some(1.0 / 25.0));
    }

    #[test]
    fn two_zones_of_same_level() {
        #[rustfmt::skip]
        let levels = vec![
            3, 3, 0, 0,
            0, 0, 0, 3,
            1, 0, 3, 3,
            1, 0, 3, 3,
        ];
        let m = glszm(&QuantizedRoi::from_levels(4, 4, levels, 4).unwrap());
        assert_eq!(m.get(2, 1), 1.0);
        assert_eq!(m.get(2, 4), 1.0);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.sum(), 3.0);
    }

    #[test]
    fn diagonal_neighbors_join_zones() {
        let m = glszm(&QuantizedRoi::from_levels(2, 2, vec![1, 2, 2, 1], 2).unwrap());
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 1), 1.0);
    }
}
