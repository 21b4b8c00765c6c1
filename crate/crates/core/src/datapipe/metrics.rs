use super::{Dataset, FeatureSpec};
use crate::error::{Error, Result};
use crate::neural::{Mlp, ScalerParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub n: usize,
    /// Mean absolute error [K].
    pub mae: f64,
    /// Population standard deviation of the absolute error [K].
    pub std: f64,
    /// Mean absolute percentage error of the wall temperature [%].
    pub mape: f64,
}

/// Mean and population standard deviation of `|actual - predicted|`,
/// optionally weighted.
pub fn absolute_error_stats(actual: &[f64], predicted: &[f64], weights: Option<&[f64]>) -> Result<(f64, f64)> {
    if actual.is_empty() {
        return Err(Error::Degenerate("no samples to evaluate".into()));
    }
    if actual.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            actual: predicted.len(),
        });
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let wsum: f64 = (0..actual.len()).map(w).sum();
    let errs: Vec<f64> = actual.iter().zip(predicted).map(|(a, p)| (a - p).abs()).collect();
    let mae = errs.iter().enumerate().map(|(i, e)| w(i) * e).sum::<f64>() / wsum;
    let var = errs.iter().enumerate().map(|(i, e)| w(i) * (e - mae) * (e - mae)).sum::<f64>() / wsum;
    Ok((mae, var.sqrt()))
}

/// Mean absolute percentage error `100 * mean(|y - ŷ| / |y|)`.
pub fn mape_percent(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.is_empty() {
        return Err(Error::Degenerate("no samples to evaluate".into()));
    }
    if actual.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            actual: predicted.len(),
        });
    }
    let s: f64 = actual.iter().zip(predicted).map(|(a, p)| ((a - p) / a).abs()).sum();
    Ok(100.0 * s / actual.len() as f64)
}

/// Wall-temperature predictions for every row of `ds`.
pub fn predict_dataset(model: &Mlp, scaler: &ScalerParams, ds: &Dataset) -> Result<Vec<f64>> {
    let spec = FeatureSpec::new(scaler.feature_names().to_vec())?;
    if spec.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            actual: spec.len(),
        });
    }
    let x = scaler.transform_rows(&ds.features(&spec))?;
    model.predict(&x)
}

pub fn evaluate(model: &Mlp, scaler: &ScalerParams, ds: &Dataset) -> Result<Evaluation> {
    evaluate_weighted(model, scaler, ds, None)
}

/// Like [`evaluate`], with MAE and its spread weighted per sample (for
/// example by importance weights). MAPE stays unweighted.
pub fn evaluate_weighted(model: &Mlp, scaler: &ScalerParams, ds: &Dataset, weights: Option<&[f64]>) -> Result<Evaluation> {
    let y = ds.require_labels()?;
    if y.is_empty() {
        return Err(Error::Degenerate("empty dataset".into()));
    }
    if let Some(w) = weights {
        if w.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: y.len(),
                actual: w.len(),
            });
        }
    }
    let pred = predict_dataset(model, scaler, ds)?;
    let (mae, std) = absolute_error_stats(y, &pred, weights)?;
    Ok(Evaluation {
        n: y.len(),
        mae,
        std,
        mape: mape_percent(y, &pred)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert_eq!(absolute_error_stats(&[1.0, 2.0], &[1.0, 2.0], None).unwrap(), (0.0, 0.0));
        assert_eq!(absolute_error_stats(&[10.0, 10.0], &[10.0, 14.0], None).unwrap(), (2.0, 2.0));
        approx::assert_relative_eq!(mape_percent(&[100.0], &[104.0]).unwrap(), 4.0, max_relative = 1e-12);
        assert!(absolute_error_stats(&[], &[], None).is_err());
    }
}
