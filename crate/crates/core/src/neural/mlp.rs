//! Fully connected feedforward network with ReLU hidden layers and a single
//! linear output.
//!
//! Weights of layer `l` are stored row-major with shape
//! `layer_dims[l + 1] x layer_dims[l]`. Batched inputs are flat row-major
//! buffers of `n x input_dim` values.

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layer_dims: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Gradient of the cost, shaped like the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(model: &Mlp) -> Self {
        Gradients {
            weights: model.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: model.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    fn clear(&mut self) {
        self.weights.iter_mut().for_each(|w| w.fill(0.0));
        self.biases.iter_mut().for_each(|b| b.fill(0.0));
    }
}

/// A view of labelled samples.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    /// Row-major inputs, `len() x input_dim`.
    pub x: &'a [f64],
    pub y: &'a [f64],
    /// Per-sample multipliers of the squared error.
    pub sample_weights: Option<&'a [f64]>,
}

impl<'a> Batch<'a> {
    pub fn new(x: &'a [f64], y: &'a [f64]) -> Self {
        Batch { x, y, sample_weights: None }
    }

    pub fn with_weights(mut self, w: &'a [f64]) -> Self {
        self.sample_weights = Some(w);
        self
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Reusable activation buffers for batched passes.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

fn check_dims(layer_dims: &[usize]) -> Result<()> {
    if layer_dims.len() < 2 {
        return Err(Error::Validation("a network needs at least input and output layers".into()));
    }
    if layer_dims.contains(&0) {
        return Err(Error::Validation("layer widths must be at least 1".into()));
    }
    if *layer_dims.last().unwrap() != 1 {
        return Err(Error::Validation("output layer must have width 1".into()));
    }
    Ok(())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

impl Mlp {
    /// Network with every weight and bias set to zero.
    pub fn zeros(layer_dims: &[usize]) -> Result<Self> {
        check_dims(layer_dims)?;
        Ok(Mlp {
            layer_dims: layer_dims.to_vec(),
            weights: layer_dims.windows(2).map(|w| vec![0.0; w[0] * w[1]]).collect(),
            biases: layer_dims[1..].iter().map(|&n| vec![0.0; n]).collect(),
        })
    }

    pub fn from_parts(layer_dims: Vec<usize>, weights: Vec<Vec<f64>>, biases: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(&layer_dims)?;
        let n = layer_dims.len() - 1;
        if weights.len() != n || biases.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: weights.len().min(biases.len()),
            });
        }
        for (l, w) in layer_dims.windows(2).enumerate() {
            if weights[l].len() != w[0] * w[1] {
                return Err(Error::DimensionMismatch {
                    expected: w[0] * w[1],
                    actual: weights[l].len(),
                });
            }
            if biases[l].len() != w[1] {
                return Err(Error::DimensionMismatch {
                    expected: w[1],
                    actual: biases[l].len(),
                });
            }
        }
        Ok(Mlp { layer_dims, weights, biases })
    }

    /// Uniform initialisation in `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn init_uniform<R: Rng + ?Sized>(layer_dims: &[usize], rng: &mut R) -> Result<Self> {
        let mut m = Self::zeros(layer_dims)?;
        for (l, w) in layer_dims.windows(2).enumerate() {
            let limit = (6.0 / (w[0] + w[1]) as f64).sqrt();
            for v in m.weights[l].iter_mut() {
                *v = rng.random_range(-limit..limit);
            }
        }
        Ok(m)
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.biases
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>() + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    /// Sum of squared weights (biases excluded).
    pub fn squared_weight_norm(&self) -> f64 {
        self.weights.iter().flatten().map(|w| w * w).sum()
    }

    /// SHA-256 over the little-endian bytes of the layer widths, weights and biases.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for d in &self.layer_dims {
            h.update((*d as u64).to_le_bytes());
        }
        for (w, b) in self.weights.iter().zip(&self.biases) {
            for v in w.iter().chain(b) {
                h.update(v.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Scales the output layer so that the network output `y` becomes
    /// `scale * y + shift`.
    pub fn rescale_output(&mut self, scale: f64, shift: f64) {
        let last = self.weights.len() - 1;
        self.weights[last].iter_mut().for_each(|w| *w *= scale);
        self.biases[last].iter_mut().for_each(|b| *b = *b * scale + shift);
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: x.len(),
            });
        }
        let mut ws = Workspace::default();
        Ok(self.forward_batch(x, 1, &mut ws)[0])
    }

    /// Predictions for `x.len() / input_dim` rows.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d = self.input_dim();
        if !x.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: x.len() % d,
            });
        }
        let mut out = Vec::with_capacity(x.len() / d);
        let mut ws = Workspace::default();
        for chunk in x.chunks(4096 * d) {
            out.extend_from_slice(self.forward_batch(chunk, chunk.len() / d, &mut ws));
        }
        Ok(out)
    }

    /// Forward pass over `n` rows; returns the output column.
    pub(crate) fn forward_batch<'w>(&self, x: &[f64], n: usize, ws: &'w mut Workspace) -> &'w [f64] {
        let n_layers = self.weights.len();
        ws.acts.resize_with(n_layers, Vec::new);
        for l in 0..n_layers {
            let (d_in, d_out) = (self.layer_dims[l], self.layer_dims[l + 1]);
            let (prev, rest) = ws.acts.split_at_mut(l);
            let input: &[f64] = if l == 0 { x } else { &prev[l - 1] };
            let out = &mut rest[0];
            out.clear();
            out.resize(n * d_out, 0.0);
            let w = &self.weights[l];
            let b = &self.biases[l];
            let hidden = l + 1 < n_layers;
            for r in 0..n {
                let row = &input[r * d_in..(r + 1) * d_in];
                let o = &mut out[r * d_out..(r + 1) * d_out];
                for j in 0..d_out {
                    let z = b[j] + dot(row, &w[j * d_in..(j + 1) * d_in]);
                    o[j] = if hidden { z.max(0.0) } else { z };
                }
            }
        }
        &ws.acts[n_layers - 1]
    }

    fn check_batch(&self, batch: &Batch) -> Result<()> {
        if batch.is_empty() {
            return Err(Error::Degenerate("empty batch".into()));
        }
        let expected = batch.len() * self.input_dim();
        if batch.x.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: batch.x.len(),
            });
        }
        if let Some(w) = batch.sample_weights {
            if w.len() != batch.len() {
                return Err(Error::DimensionMismatch {
                    expected: batch.len(),
                    actual: w.len(),
                });
            }
        }
        Ok(())
    }

    /// Regularised cost `1/(2m) Σ w_i (y_i - f(x_i))² + α/2 Σ W²`.
    pub fn cost(&self, batch: &Batch, alpha_l2: f64) -> Result<f64> {
        self.check_batch(batch)?;
        let mut ws = Workspace::default();
        let mut total = 0.0;
        let d = self.input_dim();
        let step = 4096;
        for start in (0..batch.len()).step_by(step) {
            let end = (start + step).min(batch.len());
            let pred = self.forward_batch(&batch.x[start * d..end * d], end - start, &mut ws);
            for (i, p) in pred.iter().enumerate() {
                let r = batch.y[start + i] - p;
                let w = batch.sample_weights.map_or(1.0, |sw| sw[start + i]);
                total += w * r * r;
            }
        }
        Ok(total / (2.0 * batch.len() as f64) + 0.5 * alpha_l2 * self.squared_weight_norm())
    }

    /// Exact gradient of [`cost`](Self::cost) by backpropagation.
    ///
    /// The ReLU derivative at exactly zero is taken as zero.
    pub fn backprop(&self, batch: &Batch, alpha_l2: f64) -> Result<Gradients> {
        self.check_batch(batch)?;
        let mut grads = Gradients::zeros_like(self);
        let mut ws = Workspace::default();
        self.backprop_into(batch, alpha_l2, &mut ws, &mut grads);
        Ok(grads)
    }

    /// Writes the gradient into `grads` and returns the cost. The batch must
    /// already be validated.
    pub(crate) fn backprop_into(&self, batch: &Batch, alpha_l2: f64, ws: &mut Workspace, grads: &mut Gradients) -> f64 {
        let n = batch.len();
        let n_layers = self.weights.len();
        self.forward_batch(batch.x, n, ws);
        grads.clear();

        ws.deltas.resize_with(n_layers, Vec::new);
        let inv_m = 1.0 / n as f64;
        let mut sse = 0.0;
        {
            let out = &ws.acts[n_layers - 1];
            let delta = &mut ws.deltas[n_layers - 1];
            delta.clear();
            delta.resize(n, 0.0);
            for i in 0..n {
                let r = out[i] - batch.y[i];
                let w = batch.sample_weights.map_or(1.0, |sw| sw[i]);
                sse += w * r * r;
                delta[i] = w * r * inv_m;
            }
        }

        for l in (0..n_layers).rev() {
            let (d_in, d_out) = (self.layer_dims[l], self.layer_dims[l + 1]);
            let (lower, upper) = ws.deltas.split_at_mut(l);
            let delta = &upper[0];
            let input: &[f64] = if l == 0 { batch.x } else { &ws.acts[l - 1] };
            let gw = &mut grads.weights[l];
            let gb = &mut grads.biases[l];
            for r in 0..n {
                let drow = &delta[r * d_out..(r + 1) * d_out];
                let xrow = &input[r * d_in..(r + 1) * d_in];
                for (j, &dj) in drow.iter().enumerate() {
                    if dj != 0.0 {
                        axpy(&mut gw[j * d_in..(j + 1) * d_in], dj, xrow);
                        gb[j] += dj;
                    }
                }
            }
            if alpha_l2 != 0.0 {
                axpy(gw, alpha_l2, &self.weights[l]);
            }
            if l > 0 {
                let prev = &mut lower[l - 1];
                prev.clear();
                prev.resize(n * d_in, 0.0);
                let w = &self.weights[l];
                for r in 0..n {
                    let drow = &delta[r * d_out..(r + 1) * d_out];
                    let prow = &mut prev[r * d_in..(r + 1) * d_in];
                    for (j, &dj) in drow.iter().enumerate() {
                        if dj != 0.0 {
                            axpy(prow, dj, &w[j * d_in..(j + 1) * d_in]);
                        }
                    }
                    let arow = &input[r * d_in..(r + 1) * d_in];
                    for (p, &a) in prow.iter_mut().zip(arow) {
                        if a <= 0.0 {
                            *p = 0.0;
                        }
                    }
                }
            }
        }
        sse * inv_m * 0.5 + 0.5 * alpha_l2 * self.squared_weight_norm()
    }
}
