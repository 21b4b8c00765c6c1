use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mlp::Workspace;
use super::{Adam, Batch, Gradients, HyperParams, Mlp, ScalerParams};
use crate::datapipe::{Dataset, FeatureSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Regularised cost on the full training set after the epoch, in the
    /// units the optimiser works in.
    pub train_cost: f64,
    /// Validation mean absolute error and its standard deviation [K].
    pub val_mae: f64,
    pub val_std: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainReport {
    pub epochs: Vec<EpochRecord>,
    pub target_mean: f64,
    pub target_std: f64,
    /// [`Mlp::checksum`] of the returned model.
    pub weights_checksum: String,
}

impl TrainReport {
    /// Per-epoch history as CSV (wall-clock times are left out so that the
    /// file is reproducible).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epoch,train_cost,val_mae[K],val_std[K]\n");
        for e in &self.epochs {
            s.push_str(&format!(
                "{},{},{},{}\n",
                e.epoch,
                crate::io_util::fmt_f64(e.train_cost),
                crate::io_util::fmt_f64(e.val_mae),
                crate::io_util::fmt_f64(e.val_std)
            ));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub model: Mlp,
    pub scaler: ScalerParams,
    pub report: TrainReport,
}

/// Row-major inputs with one label per row.
#[derive(Debug, Clone, Copy)]
pub struct Samples<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Trains on labelled datasets using the features named by `spec`.
pub fn train(
    train_set: &Dataset,
    val_set: &Dataset,
    spec: &FeatureSpec,
    hp: &HyperParams,
    importance: Option<&[f64]>,
) -> Result<Trained> {
    let xt = train_set.features(spec);
    let yt = train_set.require_labels()?;
    let xv = val_set.features(spec);
    let yv = val_set.require_labels()?;
    train_arrays(
        spec.names(),
        Samples { x: &xt, y: yt },
        Samples { x: &xv, y: yv },
        hp,
        importance,
    )
}

/// Minibatch ADAM training on raw (unscaled) arrays.
///
/// The scaler is fitted on the training inputs. Importance weights, when
/// given, multiply the per-sample squared errors after being normalised to
/// mean 1. Runs are deterministic for a given `hp.rng_seed`.
pub fn train_arrays(
    feature_names: &[String],
    train: Samples,
    val: Samples,
    hp: &HyperParams,
    importance: Option<&[f64]>,
) -> Result<Trained> {
    hp.validate()?;
    let d = feature_names.len();
    let n = train.y.len();
    if n == 0 || val.y.is_empty() {
        return Err(Error::Degenerate("training and validation sets must be non-empty".into()));
    }
    for s in [&train, &val] {
        if s.x.len() != s.y.len() * d {
            return Err(Error::DimensionMismatch {
                expected: s.y.len() * d,
                actual: s.x.len(),
            });
        }
    }
    let weights: Option<Vec<f64>> = match importance {
        None => None,
        Some(w) => {
            if w.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: w.len() });
            }
            let mean = w.iter().sum::<f64>() / n as f64;
            if !(mean > 0.0 && mean.is_finite()) || w.iter().any(|v| *v < 0.0) {
                return Err(Error::Validation("importance weights must be non-negative with positive mean".into()));
            }
            Some(w.iter().map(|v| v / mean).collect())
        }
    };

    let scaler = ScalerParams::fit(train.x, feature_names)?;
    let xs = scaler.transform_rows(train.x)?;
    let xs_val = scaler.transform_rows(val.x)?;
    let (y_mean, y_std) = if hp.standardize_target {
        let (m, s) = mean_std(train.y);
        (m, if s > 0.0 { s } else { 1.0 })
    } else {
        (0.0, 1.0)
    };
    let ys: Vec<f64> = train.y.iter().map(|y| (y - y_mean) / y_std).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(hp.rng_seed);
    let mut model = Mlp::init_uniform(&hp.layer_dims(d), &mut rng)?;
    let mut adam = Adam::new(&model, hp.adam());
    let mut grads = Gradients::zeros_like(&model);
    let mut ws = Workspace::default();
    let mut order: Vec<usize> = (0..n).collect();
    let bs = hp.minibatch_size.min(n);
    let mut bx = Vec::with_capacity(bs * d);
    let mut by = Vec::with_capacity(bs);
    let mut bw = Vec::with_capacity(bs);

    let mut report = TrainReport {
        target_mean: y_mean,
        target_std: y_std,
        ..Default::default()
    };
    let full = Batch {
        x: &xs,
        y: &ys,
        sample_weights: weights.as_deref(),
    };

    for epoch in 1..=hp.epochs {
        let started = Instant::now();
        order.shuffle(&mut rng);
        for chunk in order.chunks(bs) {
            bx.clear();
            by.clear();
            bw.clear();
            for &i in chunk {
                bx.extend_from_slice(&xs[i * d..(i + 1) * d]);
                by.push(ys[i]);
                if let Some(w) = &weights {
                    bw.push(w[i]);
                }
            }
            let batch = Batch {
                x: &bx,
                y: &by,
                sample_weights: weights.as_ref().map(|_| bw.as_slice()),
            };
            let c = model.backprop_into(&batch, hp.alpha_l2, &mut ws, &mut grads);
            if !c.is_finite() {
                report.weights_checksum = model.checksum();
                return Err(Error::Divergence { epoch, report: Box::new(report) });
            }
            adam.step(&mut model, &grads);
        }

        let train_cost = model.cost(&full, hp.alpha_l2)?;
        let pred = model.predict(&xs_val)?;
        let abs_err: Vec<f64> = pred
            .iter()
            .zip(val.y)
            .map(|(p, y)| (p * y_std + y_mean - y).abs())
            .collect();
        let (val_mae, val_std) = mean_std(&abs_err);
        report.epochs.push(EpochRecord {
            epoch,
            train_cost,
            val_mae,
            val_std,
            seconds: started.elapsed().as_secs_f64(),
        });
        if !(train_cost.is_finite() && val_mae.is_finite()) {
            report.weights_checksum = model.checksum();
            return Err(Error::Divergence { epoch, report: Box::new(report) });
        }
    }

    model.rescale_output(y_std, y_mean);
    report.weights_checksum = model.checksum();
    Ok(Trained { model, scaler, report })
}
