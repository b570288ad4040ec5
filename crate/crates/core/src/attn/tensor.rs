use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Batch,
    Channel,
    Height,
    Width,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::Batch => 0,
            Axis::Channel => 1,
            Axis::Height => 2,
            Axis::Width => 3,
        }
    }
}

/// Dense row-major rank-4 tensor, dims `[batch, channel, height, width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dims: [usize; 4],
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn new(dims: [usize; 4], data: Vec<f64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if dims.contains(&0) {
            return Err(Error::input("tensor extents must be positive"));
        }
        if data.len() != n {
            return Err(Error::mismatch("tensor data", n, data.len()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("tensor contains non-finite values"));
        }
        Ok(Self { dims, data })
    }

    pub fn filled(dims: [usize; 4], value: f64) -> Self {
        Self {
            dims,
            data: vec![value; dims.iter().product()],
        }
    }

    pub fn zeros(dims: [usize; 4]) -> Self {
        Self::filled(dims, 0.0)
    }

    pub fn from_fn(dims: [usize; 4], mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for b in 0..dims[0] {
            for c in 0..dims[1] {
                for h in 0..dims[2] {
                    for w in 0..dims[3] {
                        data.push(f(b, c, h, w));
                    }
                }
            }
        }
        Self { dims, data }
    }

    /// Entries drawn uniformly from `[-scale, scale)`.
    pub fn random(dims: [usize; 4], scale: f64, rng: &mut impl Rng) -> Self {
        Self::from_fn(dims, |_, _, _, _| rng.gen_range(-scale..scale))
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn offset(&self, b: usize, c: usize, h: usize, w: usize) -> usize {
        let [_, cs, hs, ws] = self.dims;
        ((b * cs + c) * hs + h) * ws + w
    }

    #[inline]
    pub fn get(&self, b: usize, c: usize, h: usize, w: usize) -> f64 {
        self.data[self.offset(b, c, h, w)]
    }

    #[inline]
    pub fn set(&mut self, b: usize, c: usize, h: usize, w: usize, v: f64) {
        let i = self.offset(b, c, h, w);
        self.data[i] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            dims: self.dims,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Tensor4, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self {
            dims: self.dims,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub(crate) fn same_dims(&self, other: &Tensor4) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::input(alloc::format!(
                "tensor dims {:?} and {:?} differ",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Repeats a single-channel tensor `channels` times along the channel axis.
    pub(crate) fn broadcast_channels(&self, channels: usize) -> Self {
        let [b, _, h, w] = self.dims;
        Self::from_fn([b, channels, h, w], |bi, _, hi, wi| self.get(bi, 0, hi, wi))
    }

    /// Sums over the channel axis, keeping it with extent 1.
    pub(crate) fn sum_channels(&self) -> Self {
        let [b, c, h, w] = self.dims;
        Self::from_fn([b, 1, h, w], |bi, _, hi, wi| (0..c).map(|ci| self.get(bi, ci, hi, wi)).sum())
    }
}
