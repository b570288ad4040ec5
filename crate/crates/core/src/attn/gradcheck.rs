use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{triplet_backward, triplet_forward, Tensor4, TripletParams};
use crate::math::abs;
use crate::{Error, Result};

/// Central-difference step.
pub const GRADCHECK_EPS: f64 = 1e-6;

/// Largest extent per axis accepted by [`gradcheck_seeded`].
pub const MAX_GRADCHECK_EXTENT: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupError {
    pub name: &'static str,
    pub max_rel_error: f64,
}

/// Analytic vs numerical gradient agreement per parameter group.
#[derive(Debug, Clone, PartialEq)]
pub struct GradcheckReport {
    pub dims: [usize; 4],
    pub kernel_size: usize,
    pub seed: Option<u64>,
    pub eps: f64,
    /// `input`, `kernel1..3`, `bias1..3`, in that order.
    pub groups: Vec<GroupError>,
    pub max_rel_error: f64,
}

/// `L(y) = sum(y^2) / 2` difference `L(y_plus) - L(y_minus)`, summed per
/// element as `(a - b)(a + b) / 2` to avoid cancelling two large totals.
fn loss_difference(plus: &Tensor4, minus: &Tensor4) -> f64 {
    plus.data()
        .iter()
        .zip(minus.data())
        .map(|(&a, &b)| 0.5 * (a - b) * (a + b))
        .sum()
}

/// `max |analytic - numeric| / max(|analytic|, |numeric|)` over the group,
/// i.e. the relative error of the gradient vector in the max norm.
fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for (&a, &n) in analytic.iter().zip(numeric) {
        diff = diff.max(abs(a - n));
        scale = scale.max(abs(a)).max(abs(n));
    }
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

fn numeric_grad(len: usize, mut eval: impl FnMut(usize, f64) -> Result<Tensor4>) -> Result<Vec<f64>> {
    (0..len)
        .map(|i| {
            let plus = eval(i, GRADCHECK_EPS)?;
            let minus = eval(i, -GRADCHECK_EPS)?;
            Ok(loss_difference(&plus, &minus) / (2.0 * GRADCHECK_EPS))
        })
        .collect()
}

/// Compares [`triplet_backward`] with central differences of
/// `L(y) = sum(y^2) / 2` for every input element, kernel weight and bias.
pub fn gradcheck(x: &Tensor4, params: &TripletParams) -> Result<GradcheckReport> {
    let (y, cache) = triplet_forward(x, params)?;
    let (dx, grads) = triplet_backward(&cache, &y)?;
    let forward = |x: &Tensor4, p: &TripletParams| triplet_forward(x, p).map(|(y, _)| y);

    let mut groups = Vec::with_capacity(7);
    let num_dx = numeric_grad(x.len(), |i, e| {
        let mut xp = x.clone();
        xp.data_mut()[i] += e;
        forward(&xp, params)
    })?;
    groups.push(GroupError {
        name: "input",
        max_rel_error: relative_error(dx.data(), &num_dx),
    });

    const KERNEL_NAMES: [&str; 3] = ["kernel1", "kernel2", "kernel3"];
    const BIAS_NAMES: [&str; 3] = ["bias1", "bias2", "bias3"];
    for (b, name) in KERNEL_NAMES.iter().enumerate() {
        let n = params.kernels[b].len();
        let num = numeric_grad(n, |i, e| {
            let mut p = params.clone();
            p.kernels[b].data_mut()[i] += e;
            forward(x, &p)
        })?;
        groups.push(GroupError {
            name,
            max_rel_error: relative_error(grads.kernels[b].data(), &num),
        });
    }
    for (b, name) in BIAS_NAMES.iter().enumerate() {
        let num = numeric_grad(1, |_, e| {
            let mut p = params.clone();
            p.biases[b] += e;
            forward(x, &p)
        })?;
        groups.push(GroupError {
            name,
            max_rel_error: relative_error(&[grads.biases[b]], &num),
        });
    }
    let max_rel_error = groups.iter().map(|g| g.max_rel_error).fold(0.0, f64::max);
    Ok(GradcheckReport {
        dims: x.dims(),
        kernel_size: params.kernel_size(),
        seed: None,
        eps: GRADCHECK_EPS,
        groups,
        max_rel_error,
    })
}

/// Draws an input uniform in `[-1, 1)` and parameters uniform in
/// `[-0.5, 0.5)` from `seed`, then runs [`gradcheck`].
pub fn gradcheck_seeded(dims: [usize; 4], kernel_size: usize, seed: u64) -> Result<GradcheckReport> {
    if dims.iter().any(|&d| d == 0 || d > MAX_GRADCHECK_EXTENT) {
        return Err(Error::config(alloc::format!(
            "gradcheck extents must lie in 1..={MAX_GRADCHECK_EXTENT}, got {dims:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Tensor4::random(dims, 1.0, &mut rng);
    let params = TripletParams::random(kernel_size, 0.5, &mut rng)?;
    let mut report = gradcheck(&x, &params)?;
    report.seed = Some(seed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_case_passes() {
        let r = gradcheck_seeded([1, 2, 4, 4], 3, 1).unwrap();
        assert!(r.max_rel_error < 1e-6, "{r:?}");
        let names: Vec<_> = r.groups.iter().map(|g| g.name).collect();
        assert_eq!(names, ["input", "kernel1", "kernel2", "kernel3", "bias1", "bias2", "bias3"]);
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(gradcheck_seeded([1, 2, 3, 3], 3, 9).unwrap(), gradcheck_seeded([1, 2, 3, 3], 3, 9).unwrap());
    }

    #[test]
    fn refuses_large_dims() {
        assert!(gradcheck_seeded([1, 2, 9, 4], 3, 0).is_err());
        assert!(gradcheck_seeded([0, 2, 4, 4], 3, 0).is_err());
    }
}
