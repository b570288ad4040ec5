//! Numerical core for radiomics-regularized weak lesion localization.
//!
//! Everything in this crate is a pure function over in-memory buffers, so it
//! builds without `std` (only `alloc` is required):
//!
//! * [`image`] holds the raster types and turns class activation heatmaps into
//!   tagged bounding boxes (normalize, threshold, label, cover).
//! * [`radiomics`] quantizes a masked region and computes first-order, shape
//!   and texture-matrix (GLCM, GLSZM, GLRLM, NGTDM, GLDM) features.
//! * [`attn`] is a small dense tensor engine with the triplet-attention
//!   operator, its analytic backward pass and a finite-difference checker.
//! * [`objective`] contains the classification loss and the feature-distance
//!   regularizer.
//! * [`eval`] has ROC AUC, box IoU and the IoU-threshold localization sweep.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod attn;
mod error;
pub mod eval;
pub mod image;
mod math;
pub mod objective;
pub mod radiomics;

pub use error::{Error, Result};
