use alloc::vec::Vec;

use rand::Rng;

use super::ops::{conv2d, conv2d_backward, logistic, rotate90, zpool, zpool_backward, Plane, Rotation, ZPool};
use super::{Axis, Tensor4};
use crate::{Error, Result};

pub const DEFAULT_KERNEL_SIZE: usize = 7;

const PLANES: [Plane; 3] = [Plane::ChannelWidth, Plane::ChannelHeight, Plane::Identity];

/// One `(1, 2, k, k)` kernel and a scalar bias per branch.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletParams {
    k: usize,
    pub kernels: [Tensor4; 3],
    pub biases: [f64; 3],
}

impl TripletParams {
    pub fn new(k: usize, kernels: [Tensor4; 3], biases: [f64; 3]) -> Result<Self> {
        if k.is_multiple_of(2) {
            return Err(Error::config("kernel size must be odd"));
        }
        for kern in &kernels {
            if kern.dims() != [1, 2, k, k] {
                return Err(Error::input(alloc::format!(
                    "branch kernel must have dims [1, 2, {k}, {k}], got {:?}",
                    kern.dims()
                )));
            }
        }
        if biases.iter().any(|b| !b.is_finite()) {
            return Err(Error::input("bias is not finite"));
        }
        Ok(Self { k, kernels, biases })
    }

    pub fn zeros(k: usize) -> Result<Self> {
        let z = Tensor4::zeros([1, 2, k, k]);
        Self::new(k, [z.clone(), z.clone(), z], [0.0; 3])
    }

    /// Weights and biases uniform in `[-scale, scale)`.
    pub fn random(k: usize, scale: f64, rng: &mut impl Rng) -> Result<Self> {
        let mut kern = || Tensor4::random([1, 2, k, k], scale, rng);
        let kernels = [kern(), kern(), kern()];
        let biases = [
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        ];
        Self::new(k, kernels, biases)
    }

    pub fn kernel_size(&self) -> usize {
        self.k
    }

    fn padding(&self) -> usize {
        (self.k - 1) / 2
    }
}

/// Gradients wrt the parameters, laid out like [`TripletParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct TripletGrads {
    pub kernels: [Tensor4; 3],
    pub biases: [f64; 3],
}

#[derive(Debug, Clone)]
struct BranchCache {
    pool: ZPool,
    /// Sigmoid gate in the rotated layout, channel extent 1.
    gate: Tensor4,
}

/// Intermediates recorded by [`triplet_forward`] for the backward pass.
#[derive(Debug, Clone)]
pub struct TripletCache {
    x: Tensor4,
    params: TripletParams,
    branches: Vec<BranchCache>,
    /// Mean of the three gates mapped back onto the input layout.
    gate: Tensor4,
}

impl TripletCache {
    pub fn input_dims(&self) -> [usize; 4] {
        self.x.dims()
    }

    /// Per-element mean gate in `(0, 1)` applied to the input.
    pub fn mean_gate(&self) -> &Tensor4 {
        &self.gate
    }
}

/// Triplet attention forward pass. Each branch gate is broadcast over its
/// pooled axis and rotated back, so `y = x * (g1 + g2 + g3) / 3`, which equals
/// the mean of the three separately gated and rotated copies.
pub fn triplet_forward(x: &Tensor4, params: &TripletParams) -> Result<(Tensor4, TripletCache)> {
    let pad = params.padding();
    let mut gate_sum: Option<Tensor4> = None;
    let mut branches = Vec::with_capacity(3);
    for (i, &plane) in PLANES.iter().enumerate() {
        let rotated = rotate90(x, plane, Rotation::AntiClockwise);
        let pool = zpool(&rotated, Axis::Channel)?;
        let logits = conv2d(&pool.output, &params.kernels[i], &[params.biases[i]], pad)?;
        let gate = logits.map(logistic);
        let spread = gate.broadcast_channels(rotated.dims()[1]);
        let back = rotate90(&spread, plane, Rotation::Clockwise);
        gate_sum = Some(match gate_sum {
            None => back,
            Some(acc) => acc.zip_map(&back, |a, b| a + b)?,
        });
        branches.push(BranchCache { pool, gate });
    }
    let gate = gate_sum.expect("three branches").map(|g| g / 3.0);
    let y = x.zip_map(&gate, |a, g| a * g)?;
    Ok((
        y,
        TripletCache {
            x: x.clone(),
            params: params.clone(),
            branches,
            gate,
        },
    ))
}

/// Exact gradients of a scalar loss wrt the input and all parameters, given
/// `dy = dL/dy` for the output of the forward call that produced `cache`.
pub fn triplet_backward(cache: &TripletCache, dy: &Tensor4) -> Result<(Tensor4, TripletGrads)> {
    if dy.dims() != cache.x.dims() || cache.branches.len() != 3 {
        return Err(Error::input("upstream gradient does not match the cached forward pass"));
    }
    let pad = cache.params.padding();
    let mut dx = dy.zip_map(&cache.gate, |g, m| g * m)?;
    // dL/d(gate_b) in the input layout, identical for every branch
    let dgate = dy.zip_map(&cache.x, |g, x| g * x / 3.0)?;
    let mut dkernels = Vec::with_capacity(3);
    let mut dbiases = [0.0; 3];
    for (i, (&plane, branch)) in PLANES.iter().zip(&cache.branches).enumerate() {
        let dspread = rotate90(&dgate, plane, Rotation::AntiClockwise);
        let dg = dspread.sum_channels();
        let dlogits = dg.zip_map(&branch.gate, |d, s| d * s * (1.0 - s))?;
        let (dpool, dk, db) = conv2d_backward(&branch.pool.output, &cache.params.kernels[i], &dlogits, pad)?;
        let drot = zpool_backward(&branch.pool, &dpool)?;
        let dback = rotate90(&drot, plane, Rotation::Clockwise);
        for (a, b) in dx.data_mut().iter_mut().zip(dback.data()) {
            *a += b;
        }
        dkernels.push(dk);
        dbiases[i] = db[0];
    }
    let kernels: [Tensor4; 3] = dkernels.try_into().map_err(|_| Error::input("branch count"))?;
    Ok((
        dx,
        TripletGrads {
            kernels,
            biases: dbiases,
        },
    ))
}
