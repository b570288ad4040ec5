//! Radiomic feature extraction over a masked region.
//!
//! Intensities inside the mask are binned into `ng` gray levels
//! ([`quantize`]); the texture matrices are built on those levels. Feature
//! names are `family.Feature` and a [`FeatureVector`] is always sorted by
//! name, so vectors produced with the same [`RadiomicsConfig`] share a schema.

mod firstorder;
mod glcm;
mod gldm;
mod glrlm;
mod glszm;
mod matrix;
mod ngtdm;
mod quantize;
mod shape;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::image::{GrayImage, RoiMask};
use crate::{Error, Result};

pub use firstorder::first_order;
pub use glcm::{glcm, glcm_features};
pub use gldm::{gldm, gldm_features};
pub use glrlm::{glrlm, glrlm_features};
pub use glszm::{glszm, glszm_features};
pub use matrix::{MatrixKind, TextureMatrix};
pub use ngtdm::{ngtdm, ngtdm_features};
pub use quantize::{quantize, QuantizedRoi};
pub use shape::shape_2d;

/// In-plane pixel-pair direction used by GLCM and GLRLM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Deg0, Direction::Deg45, Direction::Deg90, Direction::Deg135];

    pub fn from_degrees(deg: u32) -> Result<Self> {
        match deg {
            0 => Ok(Direction::Deg0),
            45 => Ok(Direction::Deg45),
            90 => Ok(Direction::Deg90),
            135 => Ok(Direction::Deg135),
            _ => Err(Error::config(format!("unsupported angle {deg}; expected 0, 45, 90 or 135"))),
        }
    }

    pub fn degrees(self) -> u32 {
        match self {
            Direction::Deg0 => 0,
            Direction::Deg45 => 45,
            Direction::Deg90 => 90,
            Direction::Deg135 => 135,
        }
    }

    /// Unit step `(dx, dy)` in image coordinates (y grows downwards).
    pub fn step(self) -> (isize, isize) {
        match self {
            Direction::Deg0 => (1, 0),
            Direction::Deg45 => (1, -1),
            Direction::Deg90 => (0, -1),
            Direction::Deg135 => (-1, -1),
        }
    }
}

/// How direction-dependent features are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Average each feature over the directions with any valid pair.
    #[default]
    MeanOverAngles,
    /// One feature per direction, suffixed with `_<degrees>`.
    PerAngle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiomicsConfig {
    /// Number of gray levels after quantization.
    pub ng: u32,
    /// Neighborhood / pair distance in pixels.
    pub delta: usize,
    /// GLDM dependence tolerance on level differences.
    pub alpha: u32,
    pub angles: Vec<Direction>,
    pub aggregation: Aggregation,
}

impl Default for RadiomicsConfig {
    fn default() -> Self {
        Self {
            ng: 32,
            delta: 1,
            alpha: 0,
            angles: Direction::ALL.to_vec(),
            aggregation: Aggregation::MeanOverAngles,
        }
    }
}

impl RadiomicsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ng < 2 {
            return Err(Error::config("ng must be at least 2"));
        }
        if self.delta < 1 {
            return Err(Error::config("delta must be at least 1"));
        }
        if self.angles.is_empty() {
            return Err(Error::config("at least one angle is required"));
        }
        Ok(())
    }
}

/// Named feature values, sorted by name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector {
    entries: Vec<(String, f64)>,
}

impl FeatureVector {
    /// Sorts the pairs by name; duplicate names and non-finite values are rejected.
    pub fn from_pairs(mut entries: Vec<(String, f64)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::input(format!("duplicate feature name {}", w[0].0)));
        }
        if let Some((name, _)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::input(format!("feature {name} is not finite")));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_family(family: &str, values: Vec<(&str, f64)>) -> Result<Self> {
        Self::from_pairs(values.into_iter().map(|(n, v)| (format!("{family}.{n}"), v)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .binary_search_by(|(n, _)| n.as_str().cmp(name))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }

    /// Union of two vectors with disjoint names.
    pub fn merge(self, other: FeatureVector) -> Result<Self> {
        let mut entries = self.entries;
        entries.extend(other.entries);
        Self::from_pairs(entries)
    }
}

/// Element-wise mean of vectors that share one schema.
pub fn mean_pool(vectors: &[FeatureVector]) -> Result<FeatureVector> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::input("cannot pool an empty set of feature vectors"))?;
    let mut sums = vec![0.0; first.len()];
    for v in vectors {
        if v.len() != first.len() || v.names().zip(first.names()).any(|(a, b)| a != b) {
            return Err(Error::input("feature vectors have different schemas"));
        }
        for (s, (_, x)) in sums.iter_mut().zip(v.iter()) {
            *s += x;
        }
    }
    let n = vectors.len() as f64;
    FeatureVector::from_pairs(
        first
            .names()
            .zip(sums)
            .map(|(name, s)| (name.to_string(), s / n))
            .collect(),
    )
}

type FamilyFn = fn(&TextureMatrix) -> Result<FeatureVector>;

/// Features of one direction-dependent family, aggregated per `cfg`.
/// Directions whose matrix holds no entries are skipped when averaging; if
/// none has entries every feature of the family is reported as 0.
fn directional_family(
    family: &str,
    cfg: &RadiomicsConfig,
    build: impl Fn(Direction) -> TextureMatrix,
    features: FamilyFn,
    names: &[&str],
) -> Result<FeatureVector> {
    let per_angle: Vec<(Direction, Option<FeatureVector>)> = cfg
        .angles
        .iter()
        .map(|&d| {
            let m = build(d);
            let fv = if m.is_zero() { None } else { Some(features(&m)?) };
            Ok((d, fv))
        })
        .collect::<Result<_>>()?;
    match cfg.aggregation {
        Aggregation::MeanOverAngles => {
            let valid: Vec<FeatureVector> = per_angle.into_iter().filter_map(|(_, f)| f).collect();
            if valid.is_empty() {
                FeatureVector::from_family(family, names.iter().map(|&n| (n, 0.0)).collect())
            } else {
                mean_pool(&valid)
            }
        }
        Aggregation::PerAngle => {
            let mut pairs = Vec::new();
            for (d, fv) in per_angle {
                let suffix = d.degrees();
                match fv {
                    Some(fv) => pairs.extend(fv.iter().map(|(n, v)| (format!("{n}_{suffix}"), v))),
                    None => pairs.extend(names.iter().map(|n| (format!("{family}.{n}_{suffix}"), 0.0))),
                }
            }
            FeatureVector::from_pairs(pairs)
        }
    }
}

/// Computes every feature family for one masked region.
pub fn extract_all(img: &GrayImage, mask: &RoiMask, cfg: &RadiomicsConfig) -> Result<FeatureVector> {
    cfg.validate()?;
    let q = quantize(img, mask, cfg.ng)?;
    let mut out = first_order(img, mask, cfg.ng)?.merge(shape_2d(mask)?)?;
    out = out.merge(directional_family(
        "glcm",
        cfg,
        |d| glcm(&q, cfg.delta, d),
        glcm_features,
        &glcm::FEATURES,
    )?)?;
    out = out.merge(directional_family(
        "glrlm",
        cfg,
        |d| glrlm(&q, d),
        glrlm_features,
        &glrlm::FEATURES,
    )?)?;
    out = out.merge(glszm_features(&glszm(&q))?)?;
    out = out.merge(ngtdm_features(&ngtdm(&q, cfg.delta))?)?;
    out = out.merge(gldm_features(&gldm(&q, cfg.delta, cfg.alpha))?)?;
    Ok(out)
}
