//! Subcommand implementations. Each returns the text to write so that output
//! bytes can be compared directly; the CLI layer only does file IO.

mod auc;
mod eval;
mod extract;
mod gradcheck;
mod loss;
mod maskgen;

use std::path::PathBuf;

pub use auc::{auc, AucOutput};
pub use eval::eval;
pub use extract::{extract, ExtractRecord, Region};
pub use gradcheck::{gradcheck, GradcheckArgs, GradcheckOutput, GRADCHECK_PASS};
pub use loss::{loss, LossArgs};
pub use maskgen::{maskgen, MaskgenRecord};

use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// A manifest entry that could not be processed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryError {
    pub line: usize,
    pub image_path: PathBuf,
    pub error: String,
}

/// Per-entry outcomes of a batch run, in manifest order.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch<T> {
    pub text: String,
    pub records: Vec<T>,
    pub failures: Vec<EntryError>,
}

/// Maps `f` over `items` on a pool of `jobs` threads. Results come back in
/// input order whatever the scheduling.
pub fn run_pool<I: Sync, T: Send>(jobs: usize, items: &[I], f: impl Fn(&I) -> T + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Default worker count: logical CPUs.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
