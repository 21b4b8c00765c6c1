use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io_util::fmt_f64;
use crate::neural::{Mlp, ScalerParams};

/// Predictions over a two-input parameter sweep, all other inputs fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub x_feature: String,
    pub y_feature: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Row-major: `values[iy * x_values.len() + ix]`.
    pub values: Vec<f64>,
}

impl Heatmap {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.x_values.len() + ix]
    }

    /// First row holds the x-axis values, first column the y-axis values.
    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\\{}", self.y_feature, self.x_feature);
        for x in &self.x_values {
            let _ = write!(s, ",{}", fmt_f64(*x));
        }
        s.push('\n');
        for (iy, y) in self.y_values.iter().enumerate() {
            s.push_str(&fmt_f64(*y));
            for ix in 0..self.x_values.len() {
                let _ = write!(s, ",{}", fmt_f64(self.at(ix, iy)));
            }
            s.push('\n');
        }
        s
    }
}

fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                range.1
            } else {
                range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Sweeps `x_feature` and `y_feature` over `resolution` points each.
///
/// `fixed` is a raw (unscaled) feature vector in the scaler's order; its
/// entries for the two swept features are ignored.
#[allow(clippy::too_many_arguments)]
pub fn heatmap_grid(
    model: &Mlp,
    scaler: &ScalerParams,
    x_feature: &str,
    y_feature: &str,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
    fixed: &[f64],
) -> Result<Heatmap> {
    let names = scaler.feature_names();
    let find = |f: &str| {
        names
            .iter()
            .position(|n| n == f)
            .ok_or_else(|| Error::Validation(format!("`{f}` is not a model feature")))
    };
    let (ix, iy) = (find(x_feature)?, find(y_feature)?);
    if ix == iy {
        return Err(Error::Validation("heat-map features must differ".into()));
    }
    if resolution < 2 {
        return Err(Error::Validation("resolution must be at least 2".into()));
    }
    for (name, r) in [(x_feature, x_range), (y_feature, y_range)] {
        if !(r.0.is_finite() && r.1.is_finite()) || r.0 == r.1 {
            return Err(Error::Degenerate(format!("range of `{name}` is degenerate")));
        }
    }
    if fixed.len() != names.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            actual: fixed.len(),
        });
    }
    let xs = axis(x_range, resolution);
    let ys = axis(y_range, resolution);
    let mut batch = Vec::with_capacity(resolution * resolution * names.len());
    for &y in &ys {
        for &x in &xs {
            let mut row = fixed.to_vec();
            row[ix] = x;
            row[iy] = y;
            batch.extend(scaler.transform(&row)?);
        }
    }
    Ok(Heatmap {
        x_feature: x_feature.to_string(),
        y_feature: y_feature.to_string(),
        x_values: xs,
        y_values: ys,
        values: model.predict(&batch)?,
    })
}
