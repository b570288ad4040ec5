//! Serialized shapes of boxes, cases, scores, tensors, parameters and
//! projections.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use radloc_core::attn::{Tensor4, TripletParams};
use radloc_core::eval::{LocalizationCase, ScoredSample};
use radloc_core::image::{BoundingBox, TaggedBox};
use radloc_core::objective::{FeatureProjections, LossReport, Projection};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Reads a whole file as one JSON document.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        line: source.line(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub class_id: usize,
    pub threshold: f64,
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BoxRecord {
    pub fn new(class_id: usize, tagged: &TaggedBox) -> Self {
        let b = tagged.bbox;
        Self {
            class_id,
            threshold: tagged.threshold,
            x: b.x,
            y: b.y,
            w: b.w,
            h: b.h,
        }
    }
}

/// Box geometry; extra keys such as `class_id` or `threshold` are ignored so
/// that mask-generation output can feed evaluation directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxGeometry {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BoxGeometry {
    pub fn to_box(self) -> radloc_core::Result<BoundingBox> {
        BoundingBox::new(self.x, self.y, self.w, self.h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseLine {
    pub image_id: String,
    pub class_id: usize,
    pub gt: BoxGeometry,
    pub preds: Vec<BoxGeometry>,
}

impl CaseLine {
    pub fn to_case(&self) -> radloc_core::Result<LocalizationCase> {
        Ok(LocalizationCase {
            image_id: self.image_id.clone(),
            class_id: self.class_id,
            ground_truth: self.gt.to_box()?,
            predictions: self.preds.iter().map(|b| b.to_box()).collect::<radloc_core::Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreLine {
    pub image_id: String,
    pub class_id: usize,
    pub score: f64,
    pub label: u8,
}

impl From<ScoreLine> for ScoredSample {
    fn from(s: ScoreLine) -> Self {
        ScoredSample {
            image_id: s.image_id,
            class_id: s.class_id,
            score: s.score,
            label: s.label,
        }
    }
}

/// Flat row-major tensor fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub dims: [usize; 4],
    pub data: Vec<f64>,
}

impl TensorFile {
    pub fn to_tensor(&self) -> radloc_core::Result<Tensor4> {
        Tensor4::new(self.dims, self.data.clone())
    }
}

impl From<&Tensor4> for TensorFile {
    fn from(t: &Tensor4) -> Self {
        Self {
            dims: t.dims(),
            data: t.data().to_vec(),
        }
    }
}

/// Triplet-attention parameters. `kernels[b][c][i][j]` is weight `(i, j)` of
/// input channel `c` (0 = max, 1 = mean) in branch `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub k: usize,
    pub kernels: Vec<Vec<Vec<Vec<f64>>>>,
    pub biases: [f64; 3],
}

impl ParamFile {
    pub fn to_params(&self) -> std::result::Result<TripletParams, String> {
        let k = self.k;
        if self.kernels.len() != 3 {
            return Err(format!("expected 3 branch kernels, found {}", self.kernels.len()));
        }
        let mut tensors = Vec::with_capacity(3);
        for (b, kern) in self.kernels.iter().enumerate() {
            let flat: Vec<f64> = kern.iter().flatten().flatten().copied().collect();
            let square = kern.len() == 2 && kern.iter().all(|c| c.len() == k && c.iter().all(|r| r.len() == k));
            if !square {
                return Err(format!("kernel {} must be nested as [2][{k}][{k}]", b + 1));
            }
            tensors.push(Tensor4::new([1, 2, k, k], flat).map_err(|e| e.to_string())?);
        }
        let [a, b, c]: [Tensor4; 3] = tensors.try_into().expect("three kernels");
        TripletParams::new(k, [a, b, c], self.biases).map_err(|e| e.to_string())
    }
}

impl From<&TripletParams> for ParamFile {
    fn from(p: &TripletParams) -> Self {
        let k = p.kernel_size();
        let kernels = p
            .kernels
            .iter()
            .map(|t| (0..2).map(|c| (0..k).map(|i| (0..k).map(|j| t.get(0, c, i, j)).collect()).collect()).collect())
            .collect();
        Self {
            k,
            kernels,
            biases: p.biases,
        }
    }
}

/// Affine projection with `weights` given as `d_out` rows of `d_in` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionFile {
    pub d_in: usize,
    pub d_out: usize,
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl ProjectionFile {
    pub fn to_projection(&self) -> std::result::Result<Projection, String> {
        if self.weights.len() != self.d_out || self.weights.iter().any(|r| r.len() != self.d_in) {
            return Err(format!("weights must be {} rows of {} values", self.d_out, self.d_in));
        }
        let flat = self.weights.iter().flatten().copied().collect();
        Projection::new(self.d_in, self.d_out, flat, self.bias.clone()).map_err(|e| e.to_string())
    }
}

impl From<&Projection> for ProjectionFile {
    fn from(p: &Projection) -> Self {
        Self {
            d_in: p.d_in(),
            d_out: p.d_out(),
            weights: p.weights().chunks(p.d_in()).map(<[f64]>::to_vec).collect(),
            bias: p.bias().to_vec(),
        }
    }
}

/// The image-side and radiomic-side projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionsFile {
    pub image: ProjectionFile,
    pub radiomic: ProjectionFile,
}

impl ProjectionsFile {
    pub fn to_projections(&self) -> std::result::Result<FeatureProjections, String> {
        let image = self.image.to_projection().map_err(|e| format!("image projection: {e}"))?;
        let radiomic = self.radiomic.to_projection().map_err(|e| format!("radiomic projection: {e}"))?;
        FeatureProjections::new(image, radiomic).map_err(|e| e.to_string())
    }
}

/// Radiomic features either as a plain list or as the name-to-value map
/// written by feature extraction (taken in name order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureValues {
    List(Vec<f64>),
    Named(BTreeMap<String, f64>),
}

impl FeatureValues {
    pub fn values(&self) -> Vec<f64> {
        match self {
            FeatureValues::List(v) => v.clone(),
            FeatureValues::Named(m) => m.values().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesFile {
    pub image_features: Vec<f64>,
    pub radiomic_features: FeatureValues,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReportFile {
    #[serde(rename = "L_I")]
    pub l_i: f64,
    pub distance: f64,
    #[serde(rename = "L_II")]
    pub l_ii: f64,
}

impl From<LossReport> for LossReportFile {
    fn from(r: LossReport) -> Self {
        Self {
            l_i: r.classification,
            distance: r.distance,
            l_ii: r.total,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn params_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = TripletParams::random(3, 1.0, &mut rng).unwrap();
        let file = ParamFile::from(&p);
        let back: ParamFile = serde_json::from_str(&crate::numfmt::to_json(&file)).unwrap();
        assert_eq!(back.to_params().unwrap(), p);
    }

    #[test]
    fn ragged_kernels_are_rejected() {
        let mut file = ParamFile::from(&TripletParams::zeros(3).unwrap());
        file.kernels[1][0].pop();
        assert!(file.to_params().is_err());
    }

    #[test]
    fn projection_round_trip() {
        let p = Projection::seeded(3, 2, 9).unwrap();
        assert_eq!(ProjectionFile::from(&p).to_projection().unwrap(), p);
    }

    #[test]
    fn box_records_feed_cases() {
        let line = r#"{"image_id":"a","class_id":0,"gt":{"x":0,"y":0,"w":2,"h":2},"preds":[{"class_id":0,"threshold":60,"x":0,"y":0,"w":2,"h":2}]}"#;
        let c: CaseLine = serde_json::from_str(line).unwrap();
        assert!(c.to_case().unwrap().is_correct(1.0));
    }

    #[test]
    fn loss_report_keys() {
        let r = LossReportFile { l_i: 1.0, distance: 0.5, l_ii: 1.5 };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"L_I":1.0,"distance":0.5,"L_II":1.5}"#);
    }
}
