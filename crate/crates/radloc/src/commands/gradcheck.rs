use std::path::PathBuf;

use radloc_core::attn::{self, GradcheckReport, Tensor4, TripletParams, MAX_GRADCHECK_EXTENT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formats::{read_json, ParamFile, TensorFile};
use crate::numfmt::to_json;
use crate::{Error, Result};

/// A report passes when its largest relative error is below this.
pub const GRADCHECK_PASS: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct GradcheckArgs {
    pub dims: [usize; 4],
    pub kernel_size: usize,
    pub seed: u64,
    /// Input tensor fixture; drawn from the seed when absent.
    pub input: Option<PathBuf>,
    /// Parameter file; drawn from the seed when absent.
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct GroupJson {
    name: &'static str,
    max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradcheckOutput {
    pub dims: [usize; 4],
    pub kernel_size: usize,
    pub seed: Option<u64>,
    pub eps: f64,
    groups: Vec<GroupJson>,
    pub max_rel_error: f64,
    pub passed: bool,
}

impl From<GradcheckReport> for GradcheckOutput {
    fn from(r: GradcheckReport) -> Self {
        Self {
            dims: r.dims,
            kernel_size: r.kernel_size,
            seed: r.seed,
            eps: r.eps,
            groups: r
                .groups
                .iter()
                .map(|g| GroupJson {
                    name: g.name,
                    max_rel_error: g.max_rel_error,
                })
                .collect(),
            max_rel_error: r.max_rel_error,
            passed: r.max_rel_error < GRADCHECK_PASS,
        }
    }
}

fn check_dims(dims: [usize; 4]) -> Result<()> {
    if dims.iter().any(|&d| d == 0 || d > MAX_GRADCHECK_EXTENT) {
        return Err(Error::Usage(format!(
            "gradcheck extents must lie in 1..={MAX_GRADCHECK_EXTENT}, got {dims:?}"
        )));
    }
    Ok(())
}

/// Analytic against numeric gradients of triplet attention.
pub fn gradcheck(args: &GradcheckArgs) -> Result<(GradcheckOutput, String)> {
    let report = if args.input.is_none() && args.params.is_none() {
        check_dims(args.dims)?;
        attn::gradcheck_seeded(args.dims, args.kernel_size, args.seed)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let x = match &args.input {
            Some(p) => read_json::<TensorFile>(p)?.to_tensor()?,
            None => Tensor4::random(args.dims, 1.0, &mut rng),
        };
        check_dims(x.dims())?;
        let params = match &args.params {
            Some(p) => read_json::<ParamFile>(p)?.to_params().map_err(|e| Error::format(p, e))?,
            None => TripletParams::random(args.kernel_size, 0.5, &mut rng)?,
        };
        let mut r = attn::gradcheck(&x, &params)?;
        if args.input.is_none() || args.params.is_none() {
            r.seed = Some(args.seed);
        }
        r
    };
    let out = GradcheckOutput::from(report);
    let text = to_json(&out) + "\n";
    Ok((out, text))
}
