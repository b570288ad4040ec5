use alloc::vec;
use alloc::vec::Vec;

use super::{quantize, FeatureVector};
use crate::image::{GrayImage, RoiMask};
use crate::math::{entropy_term, powf};
use crate::{Error, Result};

/// Intensity statistics of the masked pixels. `Entropy` and `Uniformity` are
/// taken over the `ng`-level histogram; `Skewness` and `Kurtosis` of a
/// zero-variance region are reported as 0.
pub fn first_order(img: &GrayImage, mask: &RoiMask, ng: u32) -> Result<FeatureVector> {
    mask.matches(img)?;
    let mut values: Vec<f64> = img
        .pixels()
        .iter()
        .zip(mask.bits())
        .filter(|(_, &b)| b)
        .map(|(&v, _)| v)
        .collect();
    if values.is_empty() {
        return Err(Error::input("first-order features need a non-empty mask"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in &values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / powf(m2, 1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };

    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    let median = if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    };

    let q = quantize(img, mask, ng)?;
    let mut hist = vec![0usize; ng as usize];
    for &l in q.levels().iter().filter(|&&l| l > 0) {
        hist[l as usize - 1] += 1;
    }
    let (mut entropy, mut uniformity) = (0.0, 0.0);
    for &c in &hist {
        let p = c as f64 / n;
        entropy += entropy_term(p);
        uniformity += p * p;
    }

    FeatureVector::from_family(
        "firstorder",
        vec![
            ("Mean", mean),
            ("Median", median),
            ("Maximum", values[values.len() - 1]),
            ("Minimum", values[0]),
            ("Variance", m2),
            ("Skewness", skewness),
            ("Kurtosis", kurtosis),
            ("Uniformity", uniformity),
            ("Entropy", entropy),
        ],
    )
}
