//! Triplet attention on dense `(batch, channel, height, width)` tensors.
//!
//! Three branches gate the input along different dimension pairs. Each
//! branch rotates the tensor so that the pooled dimension sits in the channel
//! slot, Z-pools it to two maps (max and mean), convolves those into a single
//! gate map, squashes it with a sigmoid and multiplies it back onto the
//! rotated input before undoing the rotation:
//!
//! | branch | rotation plane | pooled axis | gate spans        |
//! |--------|----------------|-------------|-------------------|
//! | 1      | channel/width  | width       | height x channel  |
//! | 2      | channel/height | height      | channel x width   |
//! | 3      | none           | channel     | height x width    |
//!
//! The output is the mean of the three gated copies. Everything runs in
//! `f64` so the analytic backward pass can be checked against central
//! differences ([`gradcheck`]).

mod gradcheck;
mod ops;
mod tensor;
mod triplet;

pub use gradcheck::{gradcheck, gradcheck_seeded, GradcheckReport, GroupError, GRADCHECK_EPS, MAX_GRADCHECK_EXTENT};
pub use ops::{
    conv2d, conv2d_backward, rotate90, sigmoid, zpool, zpool_backward, Plane, Rotation, ZPool,
};
pub use tensor::{Axis, Tensor4};
pub use triplet::{triplet_backward, triplet_forward, TripletCache, TripletGrads, TripletParams, DEFAULT_KERNEL_SIZE};
