use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// Shuffled row indices for a train/validation partition.
///
/// The training part holds `ceil(n * train_fraction)` rows, capped at `n - 1`
/// so that validation is never empty.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Validation(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if n < 2 {
        return Err(Error::Degenerate(format!("cannot split {n} rows")));
    }
    let n_train = ((n as f64 * train_fraction).ceil() as usize).clamp(1, n - 1);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let val = idx.split_off(n_train);
    Ok((idx, val))
}

/// Random train/validation split, reproducible for a given seed.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (t, v) = split_indices(ds.len(), train_fraction, seed)?;
    Ok((ds.subset(&t), ds.subset(&v)))
}
