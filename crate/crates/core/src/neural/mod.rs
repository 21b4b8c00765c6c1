//! Feedforward network engine: forward pass, regularised cost,
//! backpropagation, ADAM, feature standardisation, minibatch training and
//! model files.

mod adam;
mod mlp;
mod model_io;
mod scaler;
mod train;

pub use adam::{adam_update, Adam, AdamConfig};
pub use mlp::{Batch, Gradients, Mlp};
pub use model_io::{load_model, model_from_str, model_to_string, save_model, MODEL_FORMAT, MODEL_VERSION};
pub use scaler::ScalerParams;
pub use train::{train, train_arrays, EpochRecord, Samples, TrainReport, Trained};

use crate::error::{Error, Result};

/// Architecture and optimiser settings for one training run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HyperParams {
    pub n_hidden_layers: usize,
    pub neurons_per_layer: usize,
    /// Weight-decay coefficient applied to `½ Σ w²`.
    pub alpha_l2: f64,
    pub minibatch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub rng_seed: u64,
    /// Train against standardised targets and fold the scaling back into the
    /// output layer afterwards. `alpha_l2` then acts in standardised units.
    pub standardize_target: bool,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            n_hidden_layers: 3,
            neurons_per_layer: 128,
            alpha_l2: 1e-6,
            minibatch_size: 256,
            epochs: 60,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            rng_seed: 0,
            standardize_target: true,
        }
    }
}

impl HyperParams {
    /// The architecture reported as optimal for the original CFD dataset:
    /// 4 x 408 ReLU layers, α = 0.1, minibatches of 4096, 150 epochs.
    pub fn reported_optimum() -> Self {
        HyperParams {
            n_hidden_layers: 4,
            neurons_per_layer: 408,
            alpha_l2: 0.1,
            minibatch_size: 4096,
            epochs: 150,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_hidden_layers == 0 || self.neurons_per_layer == 0 || self.minibatch_size == 0 {
            return Err(Error::Validation(
                "hidden layers, neurons per layer and minibatch size must be at least 1".into(),
            ));
        }
        if !(self.alpha_l2 >= 0.0 && self.alpha_l2.is_finite()) {
            return Err(Error::Validation(format!("alpha_l2 must be >= 0, got {}", self.alpha_l2)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Validation(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) || self.adam_eps <= 0.0 {
            return Err(Error::Validation("ADAM betas must lie in [0, 1) and eps be positive".into()));
        }
        Ok(())
    }

    /// Layer widths for `input_dim` features and a scalar output.
    pub fn layer_dims(&self, input_dim: usize) -> Vec<usize> {
        let mut dims = vec![input_dim];
        dims.extend(std::iter::repeat_n(self.neurons_per_layer, self.n_hidden_layers));
        dims.push(1);
        dims
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }
}
