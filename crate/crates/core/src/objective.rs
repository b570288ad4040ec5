//! Classification loss and the feature-distance regularizer.
//!
//! `L_I` is the sum of per-class binary cross-entropies. The regularized
//! objective adds `lambda * ||P_i(i_f) - P_r(r_f)||_p`, where `P_i` and `P_r`
//! are affine projections of the image features and the radiomic features
//! into a shared space. `lambda` defaults to 1, which gives the plain sum.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::{abs, ln, powf, sqrt};
use crate::{Error, Result};

/// Probabilities are clamped to `[CLAMP_EPS, 1 - CLAMP_EPS]` before the log.
pub const CLAMP_EPS: f64 = 1e-12;

/// Number of disease classes per image in the default label space.
pub const DEFAULT_NUM_CLASSES: usize = 14;

fn clamp_prob(p: f64) -> f64 {
    p.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS)
}

/// Binary cross-entropy in nats: `-y ln p - (1 - y) ln(1 - p)`.
pub fn bce(p: f64, y: u8) -> f64 {
    let p = clamp_prob(p);
    if y != 0 {
        -ln(p)
    } else {
        -ln(1.0 - p)
    }
}

fn check_labels(probs: &[f64], labels: &[u8]) -> Result<()> {
    if probs.len() != labels.len() {
        return Err(Error::mismatch("labels", probs.len(), labels.len()));
    }
    if labels.iter().any(|&y| y > 1) {
        return Err(Error::input("labels must be 0 or 1"));
    }
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::input("probabilities must be finite"));
    }
    Ok(())
}

/// `sum_k bce(p_k, y_k)`.
pub fn classification_loss(probs: &[f64], labels: &[u8]) -> Result<f64> {
    check_labels(probs, labels)?;
    Ok(probs.iter().zip(labels).map(|(&p, &y)| bce(p, y)).sum())
}

/// Gradient of [`classification_loss`] wrt each probability. Zero where the
/// clamp is active.
pub fn classification_loss_grad(probs: &[f64], labels: &[u8]) -> Result<Vec<f64>> {
    check_labels(probs, labels)?;
    Ok(probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            if p != clamp_prob(p) {
                0.0
            } else if y != 0 {
                -1.0 / p
            } else {
                1.0 / (1.0 - p)
            }
        })
        .collect())
}

/// Affine map `weights * v + bias` with a row-major `d_out x d_in` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    d_in: usize,
    d_out: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Projection {
    pub fn new(d_in: usize, d_out: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if d_in == 0 || d_out == 0 {
            return Err(Error::input("projection dimensions must be positive"));
        }
        if weights.len() != d_in * d_out {
            return Err(Error::mismatch("projection weights", d_in * d_out, weights.len()));
        }
        if bias.len() != d_out {
            return Err(Error::mismatch("projection bias", d_out, bias.len()));
        }
        if weights.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::input("projection has non-finite entries"));
        }
        Ok(Self {
            d_in,
            d_out,
            weights,
            bias,
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        let mut w = vec![0.0; d * d];
        for i in 0..d {
            w[i * d + i] = 1.0;
        }
        Self::new(d, d, w, vec![0.0; d])
    }

    /// Weights and bias uniform in `[-1/sqrt(d_in), 1/sqrt(d_in))`.
    pub fn seeded(d_in: usize, d_out: usize, seed: u64) -> Result<Self> {
        if d_in == 0 {
            return Err(Error::input("projection dimensions must be positive"));
        }
        let bound = 1.0 / sqrt(d_in as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..d_in * d_out).map(|_| rng.gen_range(-bound..bound)).collect();
        let bias = (0..d_out).map(|_| rng.gen_range(-bound..bound)).collect();
        Self::new(d_in, d_out, weights, bias)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }
}

pub fn project(v: &[f64], proj: &Projection) -> Result<Vec<f64>> {
    if v.len() != proj.d_in {
        return Err(Error::mismatch("projection input", proj.d_in, v.len()));
    }
    Ok(proj
        .weights
        .chunks(proj.d_in)
        .zip(&proj.bias)
        .map(|(row, b)| row.iter().zip(v).map(|(w, x)| w * x).sum::<f64>() + b)
        .collect())
}

fn check_norm(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::config("norm degree must be a finite value >= 1"));
    }
    Ok(())
}

/// `||v||_p` for finite `p >= 1`.
pub fn p_norm(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|x| abs(*x)).sum()
    } else if p == 2.0 {
        sqrt(v.iter().map(|x| x * x).sum())
    } else {
        powf(v.iter().map(|x| powf(abs(*x), p)).sum(), 1.0 / p)
    }
}

/// Gradient of `||v||_p`; the zero vector gets the zero subgradient.
fn p_norm_grad(v: &[f64], p: f64) -> Vec<f64> {
    let n = p_norm(v, p);
    if n == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter()
        .map(|&x| {
            let s = if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            };
            if p == 1.0 {
                s
            } else if p == 2.0 {
                x / n
            } else {
                s * powf(abs(x) / n, p - 1.0)
            }
        })
        .collect()
}

/// The two projections that bring image and radiomic features into one space.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureProjections {
    pub image: Projection,
    pub radiomic: Projection,
}

impl FeatureProjections {
    pub fn new(image: Projection, radiomic: Projection) -> Result<Self> {
        if image.d_out != radiomic.d_out {
            return Err(Error::mismatch("shared projection dimension", image.d_out, radiomic.d_out));
        }
        Ok(Self { image, radiomic })
    }

    /// Seed-initialized pair; the radiomic side uses `seed + 1`.
    pub fn seeded(d_image: usize, d_radiomic: usize, d_out: usize, seed: u64) -> Result<Self> {
        Self::new(
            Projection::seeded(d_image, d_out, seed)?,
            Projection::seeded(d_radiomic, d_out, seed.wrapping_add(1))?,
        )
    }

    fn difference(&self, image_features: &[f64], radiomic_features: &[f64]) -> Result<Vec<f64>> {
        let a = project(image_features, &self.image)?;
        let b = project(radiomic_features, &self.radiomic)?;
        Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect())
    }
}

/// `||P_i(i_f) - P_r(r_f)||_p`.
pub fn radiomic_distance(
    image_features: &[f64],
    radiomic_features: &[f64],
    projections: &FeatureProjections,
    p: f64,
) -> Result<f64> {
    check_norm(p)?;
    Ok(p_norm(&projections.difference(image_features, radiomic_features)?, p))
}

/// Settings of the regularized objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    /// Norm degree of the feature distance.
    pub p_norm: f64,
    /// Weight of the distance term. 1 reproduces the unweighted objective.
    pub lambda: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            p_norm: 2.0,
            lambda: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    /// Summed per-class cross-entropy.
    pub classification: f64,
    /// Unweighted projected feature distance.
    pub distance: f64,
    /// `classification + lambda * distance`.
    pub total: f64,
}

pub fn total_loss(
    probs: &[f64],
    labels: &[u8],
    image_features: &[f64],
    radiomic_features: &[f64],
    projections: &FeatureProjections,
    cfg: &LossConfig,
) -> Result<LossReport> {
    if !(cfg.lambda >= 0.0 && cfg.lambda.is_finite()) {
        return Err(Error::config("lambda must be finite and non-negative"));
    }
    let classification = classification_loss(probs, labels)?;
    let distance = radiomic_distance(image_features, radiomic_features, projections, cfg.p_norm)?;
    Ok(LossReport {
        classification,
        distance,
        total: classification + cfg.lambda * distance,
    })
}

/// Gradients of the regularized objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGrads {
    pub probs: Vec<f64>,
    pub image_features: Vec<f64>,
    pub radiomic_features: Vec<f64>,
    /// Row-major like [`Projection::weights`].
    pub image_weights: Vec<f64>,
    pub image_bias: Vec<f64>,
    pub radiomic_weights: Vec<f64>,
    pub radiomic_bias: Vec<f64>,
}

pub fn total_loss_grad(
    probs: &[f64],
    labels: &[u8],
    image_features: &[f64],
    radiomic_features: &[f64],
    projections: &FeatureProjections,
    cfg: &LossConfig,
) -> Result<LossGrads> {
    check_norm(cfg.p_norm)?;
    let dprobs = classification_loss_grad(probs, labels)?;
    let diff = projections.difference(image_features, radiomic_features)?;
    let g: Vec<f64> = p_norm_grad(&diff, cfg.p_norm).into_iter().map(|v| v * cfg.lambda).collect();

    let back = |proj: &Projection, input: &[f64], sign: f64| {
        let mut dinput = vec![0.0; proj.d_in];
        let mut dw = vec![0.0; proj.d_in * proj.d_out];
        for (o, &go) in g.iter().enumerate() {
            let go = sign * go;
            for i in 0..proj.d_in {
                dinput[i] += go * proj.weights[o * proj.d_in + i];
                dw[o * proj.d_in + i] = go * input[i];
            }
        }
        let db = g.iter().map(|v| sign * v).collect::<Vec<_>>();
        (dinput, dw, db)
    };
    let (di, dwi, dbi) = back(&projections.image, image_features, 1.0);
    let (dr, dwr, dbr) = back(&projections.radiomic, radiomic_features, -1.0);
    Ok(LossGrads {
        probs: dprobs,
        image_features: di,
        radiomic_features: dr,
        image_weights: dwi,
        image_bias: dbi,
        radiomic_weights: dwr,
        radiomic_bias: dbr,
    })
}
