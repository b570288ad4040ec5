//! Gray level co-occurrence matrix.

use alloc::vec;

use super::{Direction, FeatureVector, MatrixKind, QuantizedRoi, TextureMatrix};
use crate::math::{abs, entropy_term, sqrt};
use crate::{Error, Result};

pub(crate) const FEATURES: [&str; 5] = ["Contrast", "Correlation", "Energy", "Entropy", "Homogeneity"];

/// Counts ordered pairs `(p, p + delta * step(direction))` with both pixels in
/// the mask, then adds the transpose.
pub fn glcm(q: &QuantizedRoi, delta: usize, direction: Direction) -> TextureMatrix {
    let ng = q.ng() as usize;
    let mut m = TextureMatrix::zeros(MatrixKind::Glcm, ng, ng);
    m.delta = Some(delta);
    m.direction = Some(direction);
    let (dx, dy) = direction.step();
    let (dx, dy) = (dx * delta as isize, dy * delta as isize);
    for y in 0..q.height() {
        for x in 0..q.width() {
            let a = q.level(x, y);
            if a == 0 {
                continue;
            }
            let b = q.level_at(x as isize + dx, y as isize + dy);
            if b == 0 {
                continue;
            }
            let (i, j) = (a as usize - 1, b as usize - 1);
            m.add(i, j, 1.0);
            m.add(j, i, 1.0);
        }
    }
    m
}

/// Haralick-style statistics of the normalized co-occurrence matrix.
/// Correlation of a matrix with zero marginal variance is reported as 1.
pub fn glcm_features(m: &TextureMatrix) -> Result<FeatureVector> {
    if m.kind != MatrixKind::Glcm {
        return Err(Error::input("expected a GLCM"));
    }
    let total = m.sum();
    if total <= 0.0 {
        return Err(Error::input("GLCM has no co-occurrences"));
    }
    let n = m.rows;
    let (mut contrast, mut energy, mut homogeneity, mut entropy) = (0.0, 0.0, 0.0, 0.0);
    let (mut mu_i, mut mu_j) = (0.0, 0.0);
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let p = m.get(i, j) / total;
            if p == 0.0 {
                continue;
            }
            let (li, lj) = ((i + 1) as f64, (j + 1) as f64);
            let d = li - lj;
            contrast += d * d * p;
            energy += p * p;
            homogeneity += p / (1.0 + abs(d));
            entropy += entropy_term(p);
            mu_i += li * p;
            mu_j += lj * p;
            px[i] += p;
            py[j] += p;
        }
    }
    let (mut var_i, mut var_j, mut cov) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let d = (i + 1) as f64 - mu_i;
        var_i += d * d * px[i];
        let e = (i + 1) as f64 - mu_j;
        var_j += e * e * py[i];
    }
    for i in 0..n {
        for j in 0..n {
            let p = m.get(i, j) / total;
            if p != 0.0 {
                cov += ((i + 1) as f64 - mu_i) * ((j + 1) as f64 - mu_j) * p;
            }
        }
    }
    let sd = sqrt(var_i * var_j);
    let correlation = if sd > 0.0 { cov / sd } else { 1.0 };
    FeatureVector::from_family(
        "glcm",
        vec![
            ("Contrast", contrast),
            ("Correlation", correlation),
            ("Energy", energy),
            ("Entropy", entropy),
            ("Homogeneity", homogeneity),
        ],
    )
}
