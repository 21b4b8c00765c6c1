use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Dataset, FeatureSpec};
use crate::error::{Error, Result};
use crate::io_util::fmt_f64;
use crate::neural::{train, HyperParams};

/// Ranges sampled by [`random_search`]. Integer ranges are inclusive; the
/// regularisation strength and learning rate are drawn log-uniformly.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SearchSpace {
    pub hidden_layers: (usize, usize),
    pub neurons: (usize, usize),
    pub alpha_l2: (f64, f64),
    pub minibatch: (usize, usize),
    pub learning_rate: (f64, f64),
    pub epochs: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            hidden_layers: (1, 4),
            neurons: (16, 256),
            alpha_l2: (1e-7, 1e-1),
            minibatch: (32, 1024),
            learning_rate: (1e-4, 1e-2),
            epochs: 40,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        let int_ok = |r: (usize, usize)| r.0 >= 1 && r.0 <= r.1;
        let log_ok = |r: (f64, f64)| r.0 > 0.0 && r.0 <= r.1 && r.1.is_finite();
        if !(int_ok(self.hidden_layers) && int_ok(self.neurons) && int_ok(self.minibatch)) {
            return Err(Error::Validation("integer search ranges must satisfy 1 <= lo <= hi".into()));
        }
        if !(log_ok(self.alpha_l2) && log_ok(self.learning_rate)) {
            return Err(Error::Validation("log-uniform ranges must satisfy 0 < lo <= hi".into()));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, base: &HyperParams) -> HyperParams {
        let log_uniform = |rng: &mut R, (lo, hi): (f64, f64)| {
            if lo == hi {
                lo
            } else {
                (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
            }
        };
        HyperParams {
            n_hidden_layers: rng.random_range(self.hidden_layers.0..=self.hidden_layers.1),
            neurons_per_layer: rng.random_range(self.neurons.0..=self.neurons.1),
            minibatch_size: rng.random_range(self.minibatch.0..=self.minibatch.1),
            alpha_l2: log_uniform(rng, self.alpha_l2),
            learning_rate: log_uniform(rng, self.learning_rate),
            epochs: self.epochs,
            ..base.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub hp: HyperParams,
    pub val_mae: f64,
    pub val_std: f64,
    /// Set when training failed; such trials rank last.
    pub error: Option<String>,
}

/// Trains `n_trials` randomly drawn configurations on `workers` threads and
/// returns them ranked by validation MAE (best first).
///
/// Configurations come from one seeded stream so the set of trials does not
/// depend on the number of workers. Every trial trains with the same
/// `base.rng_seed`.
#[allow(clippy::too_many_arguments)]
pub fn random_search(
    space: &SearchSpace,
    base: &HyperParams,
    n_trials: usize,
    train_set: &Dataset,
    val_set: &Dataset,
    spec: &FeatureSpec,
    seed: u64,
    workers: usize,
) -> Result<Vec<Trial>> {
    space.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<HyperParams> = (0..n_trials).map(|_| space.sample(&mut rng, base)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Validation(format!("cannot start worker pool: {e}")))?;
    let mut trials: Vec<Trial> = pool.install(|| {
        configs
            .into_par_iter()
            .enumerate()
            .map(|(index, hp)| match train(train_set, val_set, spec, &hp, None) {
                Ok(t) => {
                    let last = t.report.epochs.last();
                    Trial {
                        index,
                        val_mae: last.map_or(f64::INFINITY, |e| e.val_mae),
                        val_std: last.map_or(f64::INFINITY, |e| e.val_std),
                        hp,
                        error: None,
                    }
                }
                Err(e) => Trial {
                    index,
                    hp,
                    val_mae: f64::INFINITY,
                    val_std: f64::INFINITY,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    });
    trials.sort_by(|a, b| {
        a.error
            .is_some()
            .cmp(&b.error.is_some())
            .then(a.val_mae.total_cmp(&b.val_mae))
            .then(a.index.cmp(&b.index))
    });
    Ok(trials)
}

pub fn search_csv(trials: &[Trial]) -> String {
    let mut s = String::from(
        "rank,trial,hidden_layers,neurons,alpha_l2,minibatch,learning_rate,epochs,val_mae[K],val_std[K],error\n",
    );
    for (rank, t) in trials.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            rank + 1,
            t.index,
            t.hp.n_hidden_layers,
            t.hp.neurons_per_layer,
            fmt_f64(t.hp.alpha_l2),
            t.hp.minibatch_size,
            fmt_f64(t.hp.learning_rate),
            t.hp.epochs,
            fmt_f64(t.val_mae),
            fmt_f64(t.val_std),
            t.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_in_range() {
        let space = SearchSpace::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let hp = space.sample(&mut rng, &HyperParams::default());
            assert!((1..=4).contains(&hp.n_hidden_layers));
            assert!((16..=256).contains(&hp.neurons_per_layer));
            assert!(hp.alpha_l2 >= 1e-7 && hp.alpha_l2 <= 1e-1);
            assert!(hp.learning_rate >= 1e-4 && hp.learning_rate <= 1e-2);
        }
    }
}
