//! Argument parsing and dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, default_jobs, EntryError, GradcheckArgs, LossArgs};
use crate::config::{AggregationName, ConfigFile, OutputFormat, RunConfig};
use crate::manifest::Manifest;
use crate::numfmt::to_json;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "radloc", version, about = "Radiomics-regularized weak localization toolkit")]
pub struct Cli {
    /// JSON configuration file; command-line flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for batch commands (default: logical CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Exit with an error if any manifest entry fails.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radiomic features for each manifest entry's mask or heatmap boxes.
    Extract {
        manifest: PathBuf,
        #[command(flatten)]
        radiomics: RadiomicsFlags,
        #[command(flatten)]
        boxes: BoxFlags,
    },
    /// Bounding boxes from each manifest entry's heatmap.
    Maskgen {
        manifest: PathBuf,
        #[command(flatten)]
        boxes: BoxFlags,
        /// Directory for RGB overlay PNGs.
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
    /// Localization accuracy over a sweep of IoU thresholds.
    Eval {
        cases: PathBuf,
        /// Comma-separated IoU thresholds (default 0.1,...,0.7).
        #[arg(long, value_delimiter = ',')]
        iou: Option<Vec<f64>>,
    },
    /// Per-class ROC AUC and their mean.
    Auc { scores: PathBuf },
    /// Classification loss plus the radiomic feature distance.
    Loss {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        probs: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        projections: Option<PathBuf>,
        #[arg(long)]
        p_norm: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Shared projection width when projections are seed-initialized.
        #[arg(long, default_value_t = 16)]
        d_out: usize,
        #[arg(long, default_value_t = radloc_core::objective::DEFAULT_NUM_CLASSES)]
        num_classes: usize,
    },
    /// Finite-difference check of the triplet-attention gradients.
    Gradcheck {
        /// Comma-separated batch, channel, height and width extents.
        #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [1, 2, 4, 4])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = radloc_core::attn::DEFAULT_KERNEL_SIZE)]
        kernel_size: usize,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RadiomicsFlags {
    #[arg(long)]
    pub ng: Option<u32>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub alpha: Option<u32>,
    /// Comma-separated angles in degrees from {0, 45, 90, 135}.
    #[arg(long, value_delimiter = ',')]
    pub angles: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub aggregation: Option<AggregationName>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BoxFlags {
    /// Comma-separated binarization thresholds on the [0, 255] scale.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// 4 or 8.
    #[arg(long)]
    pub connectivity: Option<u32>,
    #[arg(long)]
    pub min_area: Option<usize>,
}

impl Cli {
    fn flag_config(&self) -> ConfigFile {
        let mut c = ConfigFile {
            seed: self.seed,
            output_format: self.format,
            strict: self.strict.then_some(true),
            ..ConfigFile::default()
        };
        let boxes = |c: &mut ConfigFile, b: &BoxFlags| {
            c.thresholds = b.thresholds.clone();
            c.connectivity = b.connectivity;
            c.min_area = b.min_area;
        };
        match &self.command {
            Command::Extract { radiomics: r, boxes: b, .. } => {
                c.ng = r.ng;
                c.delta = r.delta;
                c.alpha = r.alpha;
                c.angles = r.angles.clone();
                c.aggregation = r.aggregation;
                boxes(&mut c, b);
            }
            Command::Maskgen { boxes: b, .. } => boxes(&mut c, b),
            Command::Eval { iou, .. } => c.iou_thresholds = iou.clone(),
            Command::Loss { p_norm, lambda, .. } => {
                c.p_norm = *p_norm;
                c.lambda = *lambda;
            }
            Command::Auc { .. } | Command::Gradcheck { .. } => {}
        }
        c
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        RunConfig::from_file(self.flag_config().over(file))
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn report_failures(failures: &[EntryError], total: usize) {
    for f in failures {
        eprintln!("{}", to_json(f));
    }
    if !failures.is_empty() {
        eprintln!("{} of {total} entries failed", failures.len());
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> Result<ExitCode> {
    let cfg = cli.run_config()?;
    let jobs = cli.jobs.unwrap_or_else(default_jobs);
    if jobs == 0 {
        return Err(Error::Usage("--jobs must be at least 1".into()));
    }
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Extract { manifest, .. } => {
            let m = Manifest::load(manifest)?;
            let batch = commands::extract(&m, &cfg, jobs)?;
            emit(out, &batch.text)?;
            report_failures(&batch.failures, m.entries.len());
            Ok(batch_code(cfg.strict, &batch.failures))
        }
        Command::Maskgen { manifest, overlay, .. } => {
            let m = Manifest::load(manifest)?;
            if let Some(dir) = overlay {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            let batch = commands::maskgen(&m, &cfg, jobs, overlay.as_deref())?;
            emit(out, &batch.text)?;
            report_failures(&batch.failures, m.entries.len());
            Ok(batch_code(cfg.strict, &batch.failures))
        }
        Command::Eval { cases, .. } => {
            let (_, text) = commands::eval(cases, &cfg.iou_thresholds, cfg.output_format)?;
            emit(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Auc { scores } => {
            let (res, text) = commands::auc(scores, cfg.output_format)?;
            for s in &res.skipped {
                eprintln!("warning: skipped {}: {}", s.name, s.reason);
            }
            emit(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Loss {
            features,
            probs,
            labels,
            projections,
            d_out,
            num_classes,
            ..
        } => {
            let args = LossArgs {
                features: features.clone(),
                probs: probs.clone(),
                labels: labels.clone(),
                projections: projections.clone(),
                d_out: *d_out,
                num_classes: *num_classes,
            };
            let (_, text) = commands::loss(&args, &cfg)?;
            emit(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gradcheck {
            dims,
            kernel_size,
            input,
            params,
        } => {
            let args = GradcheckArgs {
                dims: [dims[0], dims[1], dims[2], dims[3]],
                kernel_size: *kernel_size,
                seed: cfg.seed,
                input: input.clone(),
                params: params.clone(),
            };
            let (report, text) = commands::gradcheck(&args)?;
            emit(out, &text)?;
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn batch_code(strict: bool, failures: &[EntryError]) -> ExitCode {
    if strict && !failures.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
