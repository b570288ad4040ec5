use alloc::vec;
use alloc::vec::Vec;

use super::{Axis, Tensor4};
use crate::math::exp;
use crate::{Error, Result};

/// Plane a branch rotates in. The batch axis is never rotated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    ChannelWidth,
    ChannelHeight,
    Identity,
}

impl Plane {
    /// Accepts `(C, W)`, `(C, H)` in either order, or `None` for no rotation.
    pub fn from_axes(axes: Option<(Axis, Axis)>) -> Result<Self> {
        match axes {
            None => Ok(Plane::Identity),
            Some((Axis::Channel, Axis::Width)) | Some((Axis::Width, Axis::Channel)) => Ok(Plane::ChannelWidth),
            Some((Axis::Channel, Axis::Height)) | Some((Axis::Height, Axis::Channel)) => Ok(Plane::ChannelHeight),
            Some((a, b)) => Err(Error::input(alloc::format!("cannot rotate in the {a:?}/{b:?} plane"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    AntiClockwise,
    Clockwise,
}

/// Quarter turn in `plane`; the two extents of the plane swap places.
///
/// Anticlockwise in the channel/width plane maps `(B, C, H, W)` to
/// `(B, W, H, C)` with `out[b, i, h, j] = x[b, j, h, W - 1 - i]`; clockwise is
/// its inverse. The channel/height plane is analogous with height in place of
/// width.
pub fn rotate90(x: &Tensor4, plane: Plane, rotation: Rotation) -> Tensor4 {
    let [b, p, h, w] = x.dims();
    match (plane, rotation) {
        (Plane::Identity, _) => x.clone(),
        (Plane::ChannelWidth, Rotation::AntiClockwise) => {
            Tensor4::from_fn([b, w, h, p], |bi, i, hi, j| x.get(bi, j, hi, w - 1 - i))
        }
        (Plane::ChannelWidth, Rotation::Clockwise) => {
            Tensor4::from_fn([b, w, h, p], |bi, c, hi, wi| x.get(bi, p - 1 - wi, hi, c))
        }
        (Plane::ChannelHeight, Rotation::AntiClockwise) => {
            Tensor4::from_fn([b, h, p, w], |bi, i, j, wi| x.get(bi, j, h - 1 - i, wi))
        }
        (Plane::ChannelHeight, Rotation::Clockwise) => {
            Tensor4::from_fn([b, h, p, w], |bi, c, hi, wi| x.get(bi, p - 1 - hi, c, wi))
        }
    }
}

/// Z-pool result: index 0 along the pooled axis is the max, index 1 the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPool {
    pub output: Tensor4,
    pub axis: Axis,
    input_dims: [usize; 4],
    /// Flat input offset of the maximum for each pooled position.
    argmax: Vec<usize>,
}

/// Concatenates the max and the mean over `axis`, giving that axis extent 2.
/// Ties in the max resolve to the lowest index.
pub fn zpool(x: &Tensor4, axis: Axis) -> Result<ZPool> {
    if axis == Axis::Batch {
        return Err(Error::input("z-pool over the batch axis is not supported"));
    }
    let dims = x.dims();
    let ax = axis.index();
    let n = dims[ax];
    let mut out_dims = dims;
    out_dims[ax] = 2;
    let mut reduced_dims = dims;
    reduced_dims[ax] = 1;
    let mut output = Tensor4::zeros(out_dims);
    let mut argmax = Vec::with_capacity(reduced_dims.iter().product());
    let stride: usize = dims[ax + 1..].iter().product();
    for b in 0..reduced_dims[0] {
        for c in 0..reduced_dims[1] {
            for h in 0..reduced_dims[2] {
                for w in 0..reduced_dims[3] {
                    let base = x.offset(b, c, h, w);
                    let (mut best, mut best_at, mut sum) = (f64::NEG_INFINITY, base, 0.0);
                    for k in 0..n {
                        let off = base + k * stride;
                        let v = x.data()[off];
                        sum += v;
                        if v > best {
                            best = v;
                            best_at = off;
                        }
                    }
                    let mut idx = [b, c, h, w];
                    output.set(idx[0], idx[1], idx[2], idx[3], best);
                    idx[ax] = 1;
                    output.set(idx[0], idx[1], idx[2], idx[3], sum / n as f64);
                    argmax.push(best_at);
                }
            }
        }
    }
    Ok(ZPool {
        output,
        axis,
        input_dims: dims,
        argmax,
    })
}

/// Routes the gradient of a Z-pool output back to its input: the max slice
/// to the arg-max element, the mean slice evenly to every element.
pub fn zpool_backward(pool: &ZPool, dout: &Tensor4) -> Result<Tensor4> {
    pool.output.same_dims(dout)?;
    let ax = pool.axis.index();
    let n = pool.input_dims[ax] as f64;
    let stride: usize = pool.input_dims[ax + 1..].iter().product();
    let mut dx = Tensor4::zeros(pool.input_dims);
    let reduced = {
        let mut d = pool.input_dims;
        d[ax] = 1;
        d
    };
    let mut slot = 0;
    for b in 0..reduced[0] {
        for c in 0..reduced[1] {
            for h in 0..reduced[2] {
                for w in 0..reduced[3] {
                    let mut idx = [b, c, h, w];
                    let g_max = dout.get(idx[0], idx[1], idx[2], idx[3]);
                    idx[ax] = 1;
                    let g_mean = dout.get(idx[0], idx[1], idx[2], idx[3]) / n;
                    let base = dx.offset(b, c, h, w);
                    for k in 0..pool.input_dims[ax] {
                        dx.data_mut()[base + k * stride] += g_mean;
                    }
                    dx.data_mut()[pool.argmax[slot]] += g_max;
                    slot += 1;
                }
            }
        }
    }
    Ok(dx)
}

fn check_conv(x: &Tensor4, kernel: &Tensor4, bias: &[f64], padding: usize) -> Result<[usize; 4]> {
    let [b, cin, h, w] = x.dims();
    let [cout, kin, kh, kw] = kernel.dims();
    if kin != cin {
        return Err(Error::mismatch("convolution input channels", kin, cin));
    }
    if bias.len() != cout {
        return Err(Error::mismatch("convolution bias", cout, bias.len()));
    }
    if h + 2 * padding < kh || w + 2 * padding < kw {
        return Err(Error::input("kernel larger than padded input"));
    }
    Ok([b, cout, h + 2 * padding + 1 - kh, w + 2 * padding + 1 - kw])
}

/// Stride-1 cross-correlation with zero padding on both spatial axes.
pub fn conv2d(x: &Tensor4, kernel: &Tensor4, bias: &[f64], padding: usize) -> Result<Tensor4> {
    let out_dims = check_conv(x, kernel, bias, padding)?;
    let [_, cin, h, w] = x.dims();
    let [_, _, kh, kw] = kernel.dims();
    let p = padding as isize;
    let mut y = Tensor4::zeros(out_dims);
    for b in 0..out_dims[0] {
        for o in 0..out_dims[1] {
            for i in 0..out_dims[2] {
                for j in 0..out_dims[3] {
                    let mut acc = bias[o];
                    for c in 0..cin {
                        for u in 0..kh {
                            let yy = i as isize + u as isize - p;
                            if yy < 0 || yy >= h as isize {
                                continue;
                            }
                            for v in 0..kw {
                                let xx = j as isize + v as isize - p;
                                if xx < 0 || xx >= w as isize {
                                    continue;
                                }
                                acc += kernel.get(o, c, u, v) * x.get(b, c, yy as usize, xx as usize);
                            }
                        }
                    }
                    y.set(b, o, i, j, acc);
                }
            }
        }
    }
    Ok(y)
}

/// Gradients of [`conv2d`] wrt input, kernel and bias given the upstream
/// gradient `dy`.
pub fn conv2d_backward(
    x: &Tensor4,
    kernel: &Tensor4,
    dy: &Tensor4,
    padding: usize,
) -> Result<(Tensor4, Tensor4, Vec<f64>)> {
    let [cout, cin, kh, kw] = kernel.dims();
    let out_dims = check_conv(x, kernel, &vec![0.0; cout], padding)?;
    if dy.dims() != out_dims {
        return Err(Error::input("upstream gradient does not match convolution output"));
    }
    let [_, _, h, w] = x.dims();
    let p = padding as isize;
    let mut dx = Tensor4::zeros(x.dims());
    let mut dk = Tensor4::zeros(kernel.dims());
    let mut db = vec![0.0; cout];
    for b in 0..out_dims[0] {
        for o in 0..cout {
            for i in 0..out_dims[2] {
                for j in 0..out_dims[3] {
                    let g = dy.get(b, o, i, j);
                    db[o] += g;
                    for c in 0..cin {
                        for u in 0..kh {
                            let yy = i as isize + u as isize - p;
                            if yy < 0 || yy >= h as isize {
                                continue;
                            }
                            for v in 0..kw {
                                let xx = j as isize + v as isize - p;
                                if xx < 0 || xx >= w as isize {
                                    continue;
                                }
                                let (yy, xx) = (yy as usize, xx as usize);
                                let ki = dk.offset(o, c, u, v);
                                dk.data_mut()[ki] += g * x.get(b, c, yy, xx);
                                let xi = dx.offset(b, c, yy, xx);
                                dx.data_mut()[xi] += g * kernel.get(o, c, u, v);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((dx, dk, db))
}

#[inline]
pub(crate) fn logistic(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + exp(-v))
    } else {
        let e = exp(v);
        e / (1.0 + e)
    }
}

/// Element-wise logistic function.
pub fn sigmoid(x: &Tensor4) -> Tensor4 {
    x.map(logistic)
}
