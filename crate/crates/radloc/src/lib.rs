//! File formats, batch manifests and the command-line front end for
//! [`radloc_core`].
//!
//! Everything here is IO and plumbing; the numerics live in the core crate.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod formats;
pub mod io;
pub mod manifest;
pub mod numfmt;

pub use error::{Error, Result};
