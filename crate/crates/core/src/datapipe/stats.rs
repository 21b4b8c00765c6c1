//! Column statistics and Pearson correlation.

use super::{Dataset, Field};
use crate::error::{Error, Result};

pub const PERCENTILES: [f64; 5] = [1.0, 25.0, 50.0, 75.0, 99.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSummary {
    pub field: Field,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Values at [`PERCENTILES`].
    pub percentiles: [f64; 5],
}

/// Percentile `pct` in [0, 100] of sorted data, linearly interpolated
/// between order statistics at rank `pct / 100 * (n - 1)`.
pub fn percentile_sorted(sorted: &[f64], pct: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let rank = pct / 100.0 * (n - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn summarize(field: Field, values: &[f64]) -> ColumnSummary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    ColumnSummary {
        field,
        mean,
        std,
        percentiles: PERCENTILES.map(|p| percentile_sorted(&sorted, p)),
    }
}

/// Mean, standard deviation and percentiles of every column present.
pub fn stats_summary(ds: &Dataset) -> Result<Vec<ColumnSummary>> {
    if ds.is_empty() {
        return Err(Error::Degenerate("empty dataset".into()));
    }
    Ok(Field::ALL
        .into_iter()
        .filter_map(|f| ds.column(f).map(|c| summarize(f, c)))
        .collect())
}

pub fn summary_csv(rows: &[ColumnSummary]) -> String {
    let mut s = String::from("column,mean,std,p1,p25,p50,p75,p99\n");
    for r in rows {
        s.push_str(&r.field.header());
        for v in [r.mean, r.std].iter().chain(&r.percentiles) {
            s.push(',');
            s.push_str(&crate::io_util::fmt_f64(*v));
        }
        s.push('\n');
    }
    s
}

/// Pearson correlation matrix of equally long columns.
pub fn correlation_of(columns: &[(&str, &[f64])]) -> Result<Vec<Vec<f64>>> {
    let k = columns.len();
    let n = columns.first().map_or(0, |c| c.1.len());
    if n < 2 {
        return Err(Error::Degenerate("correlation needs at least 2 rows".into()));
    }
    if let Some(c) = columns.iter().find(|c| c.1.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: c.1.len(),
        });
    }
    let centred: Vec<Vec<f64>> = columns
        .iter()
        .map(|(name, c)| {
            let m = c.iter().sum::<f64>() / n as f64;
            let d: Vec<f64> = c.iter().map(|v| v - m).collect();
            let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs())) * (n as f64).sqrt();
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            // identical values leave only rounding noise after centring
            if norm <= 1e-12 * scale || norm == 0.0 {
                return Err(Error::ConstantFeature(name.to_string()));
            }
            Ok(d)
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = centred.iter().map(|d| d.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let mut out = vec![vec![0.0; k]; k];
    for i in 0..k {
        out[i][i] = 1.0;
        for j in i + 1..k {
            let s: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = (s / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}

/// Pearson correlation matrix of the given dataset columns.
pub fn correlation_matrix(ds: &Dataset, columns: &[Field]) -> Result<Vec<Vec<f64>>> {
    let cols = columns
        .iter()
        .map(|&f| {
            ds.column(f)
                .map(|c| (f.name(), c))
                .ok_or_else(|| Error::Validation(format!("dataset has no `{}` column", f.name())))
        })
        .collect::<Result<Vec<_>>>()?;
    correlation_of(&cols)
}

pub fn correlation_csv(columns: &[Field], m: &[Vec<f64>]) -> String {
    let mut s = String::from("column");
    for f in columns {
        s.push(',');
        s.push_str(f.name());
    }
    s.push('\n');
    for (f, row) in columns.iter().zip(m) {
        s.push_str(f.name());
        for v in row {
            s.push(',');
            s.push_str(&crate::io_util::fmt_f64(*v));
        }
        s.push('\n');
    }
    s
}
