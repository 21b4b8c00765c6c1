//! ADAM with bias-corrected moment estimates.

use super::{Gradients, Mlp};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// One ADAM update of `params` in place. `t` is the 1-based step index.
pub fn adam_update(params: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64], t: u64, cfg: &AdamConfig) {
    assert!(t >= 1, "ADAM step index starts at 1");
    let c1 = 1.0 - cfg.beta1.powi(t as i32);
    let c2 = 1.0 - cfg.beta2.powi(t as i32);
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = m[i] / c1;
        let v_hat = v[i] / c2;
        params[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}

/// Moment state for every parameter of a network.
#[derive(Debug, Clone)]
pub struct Adam {
    cfg: AdamConfig,
    t: u64,
    m: Gradients,
    v: Gradients,
}

impl Adam {
    pub fn new(model: &Mlp, cfg: AdamConfig) -> Self {
        Adam {
            cfg,
            t: 0,
            m: Gradients::zeros_like(model),
            v: Gradients::zeros_like(model),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, model: &mut Mlp, grads: &Gradients) {
        self.t += 1;
        let t = self.t;
        for (l, w) in model.weights_mut().iter_mut().enumerate() {
            adam_update(w, &grads.weights[l], &mut self.m.weights[l], &mut self.v.weights[l], t, &self.cfg);
        }
        for (l, b) in model.biases_mut().iter_mut().enumerate() {
            adam_update(b, &grads.biases[l], &mut self.m.biases[l], &mut self.v.biases[l], t, &self.cfg);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_gradient_leaves_parameters() {
        let mut p = [0.5, -1.0, 2.0];
        let (mut m, mut v) = ([0.0; 3], [0.0; 3]);
        adam_update(&mut p, &[0.0; 3], &mut m, &mut v, 1, &AdamConfig::default());
        assert_eq!(p, [0.5, -1.0, 2.0]);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let mut p = [0.0];
        let (mut m, mut v) = ([0.0], [0.0]);
        adam_update(&mut p, &[3.0], &mut m, &mut v, 1, &AdamConfig::default());
        // m_hat = 3, v_hat = 9 -> step = lr * 3 / (3 + 1e-8)
        approx::assert_relative_eq!(p[0], -1e-3 * 3.0 / (3.0 + 1e-8), max_relative = 1e-12);
        approx::assert_relative_eq!(p[0], -1e-3, max_relative = 1e-8);
    }

    #[test]
    fn constant_gradient_steps_are_bounded() {
        let cfg = AdamConfig::default();
        let mut p = [0.0];
        let (mut m, mut v) = ([0.0], [0.0]);
        for t in 1..=10 {
            let before = p[0];
            adam_update(&mut p, &[-0.7], &mut m, &mut v, t, &cfg);
            assert!((p[0] - before).abs() <= cfg.learning_rate * (1.0 + 1e-9));
        }
    }
}
