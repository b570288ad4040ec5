//! Run configuration: defaults, an optional JSON file, and command-line
//! overrides, merged field by field with flags taking precedence.

use std::fs;
use std::path::Path;

use radloc_core::eval::default_iou_thresholds;
use radloc_core::image::{BoxGenConfig, Connectivity};
use radloc_core::objective::LossConfig;
use radloc_core::radiomics::{Aggregation, Direction, RadiomicsConfig};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AggregationName {
    Mean,
    PerAngle,
}

impl From<AggregationName> for Aggregation {
    fn from(a: AggregationName) -> Self {
        match a {
            AggregationName::Mean => Aggregation::MeanOverAngles,
            AggregationName::PerAngle => Aggregation::PerAngle,
        }
    }
}

impl From<Aggregation> for AggregationName {
    fn from(a: Aggregation) -> Self {
        match a {
            Aggregation::MeanOverAngles => AggregationName::Mean,
            Aggregation::PerAngle => AggregationName::PerAngle,
        }
    }
}

/// Every tunable, all optional. Used both for the `--config` file and for
/// the values given on the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub ng: Option<u32>,
    pub delta: Option<usize>,
    pub alpha: Option<u32>,
    pub angles: Option<Vec<u32>>,
    pub aggregation: Option<AggregationName>,
    pub thresholds: Option<Vec<f64>>,
    pub connectivity: Option<u32>,
    pub min_area: Option<usize>,
    pub p_norm: Option<f64>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub strict: Option<bool>,
    pub iou_thresholds: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            line: source.line(),
            source,
        })
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ConfigFile) -> ConfigFile {
        ConfigFile {
            ng: self.ng.or(base.ng),
            delta: self.delta.or(base.delta),
            alpha: self.alpha.or(base.alpha),
            angles: self.angles.or(base.angles),
            aggregation: self.aggregation.or(base.aggregation),
            thresholds: self.thresholds.or(base.thresholds),
            connectivity: self.connectivity.or(base.connectivity),
            min_area: self.min_area.or(base.min_area),
            p_norm: self.p_norm.or(base.p_norm),
            lambda: self.lambda.or(base.lambda),
            seed: self.seed.or(base.seed),
            output_format: self.output_format.or(base.output_format),
            strict: self.strict.or(base.strict),
            iou_thresholds: self.iou_thresholds.or(base.iou_thresholds),
        }
    }
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub radiomics: RadiomicsConfig,
    pub boxes: BoxGenConfig,
    pub loss: LossConfig,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub strict: bool,
    pub iou_thresholds: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            radiomics: RadiomicsConfig::default(),
            boxes: BoxGenConfig::default(),
            loss: LossConfig::default(),
            seed: 0,
            output_format: OutputFormat::Json,
            strict: false,
            iou_thresholds: default_iou_thresholds(),
        }
    }
}

impl RunConfig {
    pub fn from_file(c: ConfigFile) -> Result<Self> {
        let d = RunConfig::default();
        let angles = match c.angles {
            Some(a) => a.into_iter().map(Direction::from_degrees).collect::<radloc_core::Result<Vec<_>>>()?,
            None => d.radiomics.angles,
        };
        let radiomics = RadiomicsConfig {
            ng: c.ng.unwrap_or(d.radiomics.ng),
            delta: c.delta.unwrap_or(d.radiomics.delta),
            alpha: c.alpha.unwrap_or(d.radiomics.alpha),
            angles,
            aggregation: c.aggregation.map(Into::into).unwrap_or(d.radiomics.aggregation),
        };
        radiomics.validate()?;
        let boxes = BoxGenConfig {
            thresholds: c.thresholds.unwrap_or(d.boxes.thresholds),
            connectivity: match c.connectivity {
                Some(n) => Connectivity::from_count(n)?,
                None => d.boxes.connectivity,
            },
            min_area: c.min_area.unwrap_or(d.boxes.min_area),
        };
        boxes.validate()?;
        let loss = LossConfig {
            p_norm: c.p_norm.unwrap_or(d.loss.p_norm),
            lambda: c.lambda.unwrap_or(d.loss.lambda),
        };
        if !(loss.p_norm >= 1.0 && loss.p_norm.is_finite()) {
            return Err(Error::Usage("p_norm must be a finite value >= 1".into()));
        }
        if !(loss.lambda >= 0.0 && loss.lambda.is_finite()) {
            return Err(Error::Usage("lambda must be finite and non-negative".into()));
        }
        Ok(Self {
            radiomics,
            boxes,
            loss,
            seed: c.seed.unwrap_or(d.seed),
            output_format: c.output_format.unwrap_or(d.output_format),
            strict: c.strict.unwrap_or(d.strict),
            iou_thresholds: c.iou_thresholds.unwrap_or(d.iou_thresholds),
        })
    }
}

/// The radiomics settings as echoed next to extracted features.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiomicsEcho {
    pub ng: u32,
    pub delta: usize,
    pub alpha: u32,
    pub angles: Vec<u32>,
    pub aggregation: AggregationName,
}

impl From<&RadiomicsConfig> for RadiomicsEcho {
    fn from(c: &RadiomicsConfig) -> Self {
        Self {
            ng: c.ng,
            delta: c.delta,
            alpha: c.alpha,
            angles: c.angles.iter().map(|d| d.degrees()).collect(),
            aggregation: c.aggregation.into(),
        }
    }
}
