use std::path::PathBuf;

use radloc_core::objective::{total_loss, FeatureProjections, LossReport};

use crate::config::RunConfig;
use crate::formats::{read_json, FeaturesFile, LossReportFile, ProjectionsFile};
use crate::numfmt::to_json;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LossArgs {
    pub features: PathBuf,
    pub probs: PathBuf,
    pub labels: PathBuf,
    /// Seed-initialized projections are used when absent.
    pub projections: Option<PathBuf>,
    pub d_out: usize,
    pub num_classes: usize,
}

fn check_len(name: &str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Usage(format!("{name} has {actual} values, expected {expected}")));
    }
    Ok(())
}

/// `L_I`, the projected feature distance and `L_II` for one image.
pub fn loss(args: &LossArgs, cfg: &RunConfig) -> Result<(LossReport, String)> {
    let feats: FeaturesFile = read_json(&args.features)?;
    let probs: Vec<f64> = read_json(&args.probs)?;
    let labels: Vec<u8> = read_json(&args.labels)?;
    let radiomic = feats.radiomic_features.values();
    check_len("probs", args.num_classes, probs.len())?;
    check_len("labels", args.num_classes, labels.len())?;
    let proj = match &args.projections {
        Some(p) => {
            let file: ProjectionsFile = read_json(p)?;
            file.to_projections().map_err(|e| Error::format(p, e))?
        }
        None => FeatureProjections::seeded(feats.image_features.len(), radiomic.len(), args.d_out, cfg.seed)?,
    };
    check_len("image_features", proj.image.d_in(), feats.image_features.len())?;
    check_len("radiomic_features", proj.radiomic.d_in(), radiomic.len())?;
    let report = total_loss(&probs, &labels, &feats.image_features, &radiomic, &proj, &cfg.loss)?;
    let text = to_json(&LossReportFile::from(report)) + "\n";
    Ok((report, text))
}
