use crate::error::{Error, Result};

/// Per-feature standardisation `(x - mean) / std` with population statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerParams {
    feature_names: Vec<String>,
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl ScalerParams {
    pub fn new(feature_names: Vec<String>, mean: Vec<f64>, std: Vec<f64>) -> Result<Self> {
        let d = feature_names.len();
        if mean.len() != d || std.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: mean.len().min(std.len()),
            });
        }
        if let Some(i) = std.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::ConstantFeature(feature_names[i].clone()));
        }
        Ok(ScalerParams { feature_names, mean, std })
    }

    /// Fits on row-major `x` with one column per name.
    pub fn fit(x: &[f64], feature_names: &[String]) -> Result<Self> {
        let d = feature_names.len();
        if d == 0 || x.is_empty() {
            return Err(Error::Degenerate("cannot fit a scaler on no data".into()));
        }
        if !x.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len() % d,
            });
        }
        let n = (x.len() / d) as f64;
        let mut mean = vec![0.0; d];
        for row in x.chunks_exact(d) {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for row in x.chunks_exact(d) {
            for j in 0..d {
                let c = row[j] - mean[j];
                var[j] += c * c;
            }
        }
        let std: Vec<f64> = var.iter().map(|v| (v / n).sqrt()).collect();
        for j in 0..d {
            // a column of identical values can leave rounding noise in the mean
            if std[j] <= 1e-12 * mean[j].abs() || std[j] == 0.0 {
                return Err(Error::ConstantFeature(feature_names[j].clone()));
            }
        }
        Self::new(feature_names.to_vec(), mean, std)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn std(&self) -> &[f64] {
        &self.std
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(x.iter().zip(&self.mean).zip(&self.std).map(|((v, m), s)| (v - m) / s).collect())
    }

    pub fn inverse_transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(x.iter().zip(&self.mean).zip(&self.std).map(|((v, m), s)| v * s + m).collect())
    }

    /// Standardises every row of a row-major buffer.
    pub fn transform_rows(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d = self.len();
        if !x.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len() % d,
            });
        }
        let mut out = Vec::with_capacity(x.len());
        for row in x.chunks_exact(d) {
            out.extend(row.iter().zip(&self.mean).zip(&self.std).map(|((v, m), s)| (v - m) / s));
        }
        Ok(out)
    }
}
