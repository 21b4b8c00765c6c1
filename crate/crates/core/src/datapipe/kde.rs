//! Importance weights for covariate shift from Gaussian kernel density
//! estimates.

use rayon::prelude::*;

use super::{Dataset, FeatureSpec};
use crate::error::{Error, Result};

pub const WEIGHT_CLIP: (f64, f64) = (0.1, 10.0);

/// Scott's rule bandwidth for standardised data.
pub fn scott_bandwidth(n: usize, d: usize) -> f64 {
    (n as f64).powf(-1.0 / (d as f64 + 4.0))
}

fn log_density(point: &[f64], samples: &[f64], d: usize, h: f64) -> f64 {
    let n = samples.len() / d;
    let inv = 1.0 / (2.0 * h * h);
    let mut exps = Vec::with_capacity(n);
    for s in samples.chunks_exact(d) {
        let r2: f64 = point.iter().zip(s).map(|(a, b)| (a - b) * (a - b)).sum();
        exps.push(-r2 * inv);
    }
    let max = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exps.iter().map(|e| (e - max).exp()).sum();
    let norm = (n as f64).ln() + d as f64 * (h * (2.0 * std::f64::consts::PI).sqrt()).ln();
    max + sum.ln() - norm
}

/// Weights `p_target(x_i) / p_train(x_i)` for every training row.
///
/// Both sets are standardised with the training statistics. Bandwidths follow
/// Scott's rule per set unless `bandwidth` is given. Ratios are clipped to
/// [`WEIGHT_CLIP`] and then rescaled to mean 1.
///
/// With many features and few target rows the estimated ratios tend to sit
/// at the clip bounds; estimate on the features that actually shift.
pub fn kde_importance_weights(train: &[f64], target: &[f64], d: usize, bandwidth: Option<f64>) -> Result<Vec<f64>> {
    if d == 0 || train.is_empty() || target.is_empty() {
        return Err(Error::Degenerate("importance weighting needs non-empty sets".into()));
    }
    if !train.len().is_multiple_of(d) || !target.len().is_multiple_of(d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: train.len() % d + target.len() % d,
        });
    }
    if let Some(h) = bandwidth {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Degenerate(format!("bandwidth must be positive, got {h}")));
        }
    }
    let n = train.len() / d;
    let m = target.len() / d;
    let mut mean = vec![0.0; d];
    for row in train.chunks_exact(d) {
        mean.iter_mut().zip(row).for_each(|(a, v)| *a += v);
    }
    mean.iter_mut().for_each(|a| *a /= n as f64);
    let mut std = vec![0.0; d];
    for row in train.chunks_exact(d) {
        std.iter_mut().zip(row).zip(&mean).for_each(|((s, v), mu)| *s += (v - mu) * (v - mu));
    }
    for (j, s) in std.iter_mut().enumerate() {
        *s = (*s / n as f64).sqrt();
        if *s <= 1e-12 * mean[j].abs() || *s == 0.0 {
            return Err(Error::Degenerate(format!("zero variance in feature {j} of the training set")));
        }
    }
    let standardise = |x: &[f64]| -> Vec<f64> {
        x.chunks_exact(d)
            .flat_map(|row| row.iter().zip(&mean).zip(&std).map(|((v, mu), s)| (v - mu) / s).collect::<Vec<_>>())
            .collect()
    };
    let zs = standardise(train);
    let zt = standardise(target);
    let h_train = bandwidth.unwrap_or_else(|| scott_bandwidth(n, d));
    let h_target = bandwidth.unwrap_or_else(|| scott_bandwidth(m, d));

    let mut w: Vec<f64> = zs
        .par_chunks_exact(d)
        .map(|x| {
            let ratio = (log_density(x, &zt, d, h_target) - log_density(x, &zs, d, h_train)).exp();
            ratio.clamp(WEIGHT_CLIP.0, WEIGHT_CLIP.1)
        })
        .collect();
    let mean_w = w.iter().sum::<f64>() / n as f64;
    w.iter_mut().for_each(|v| *v /= mean_w);
    Ok(w)
}

/// [`kde_importance_weights`] on the `spec` features of two datasets.
pub fn dataset_importance_weights(
    train: &Dataset,
    target: &Dataset,
    spec: &FeatureSpec,
    bandwidth: Option<f64>,
) -> Result<Vec<f64>> {
    kde_importance_weights(&train.features(spec), &target.features(spec), spec.len(), bandwidth)
}
