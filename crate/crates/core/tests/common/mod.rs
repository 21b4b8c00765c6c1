#![allow(dead_code)]

use coolchan::channel::{ChannelGeometry, HeatFluxProfile, MarchConfig, PressureBoundary};
use coolchan::neural::{Batch, Mlp, Samples};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Colebrook-White solved by fixed-point iteration on `1/sqrt(f)`.
pub fn colebrook(re: f64, rel_roughness: f64) -> f64 {
    let mut x = 1.0 / 0.02f64.sqrt();
    for _ in 0..200 {
        let next = -2.0 * (rel_roughness / 3.7 + 2.51 * x / re).log10();
        if (next - x).abs() < 1e-14 * x {
            x = next;
            break;
        }
        x = next;
    }
    1.0 / (x * x)
}

/// Largest relative deviation between backprop and central differences,
/// with a floor of `1e-4` on the denominator for near-zero gradients.
pub fn gradient_check(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_in = rng.random_range(2..7);
    let n_hidden = rng.random_range(1..4);
    let mut dims = vec![n_in];
    for _ in 0..n_hidden {
        dims.push(rng.random_range(2..9));
    }
    dims.push(1);
    let mut model = Mlp::init_uniform(&dims, &mut rng).unwrap();
    for b in model.biases_mut().iter_mut().flatten() {
        *b = rng.random_range(-0.5..0.5);
    }
    let m = rng.random_range(1..12);
    let x: Vec<f64> = (0..m * n_in).map(|_| rng.random_range(-2.0..2.0)).collect();
    let y: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..1.5)).collect();
    let alpha = if seed.is_multiple_of(2) { 0.0 } else { rng.random_range(0.0..0.5) };
    let batch = if seed.is_multiple_of(3) {
        Batch::new(&x, &y).with_weights(&w)
    } else {
        Batch::new(&x, &y)
    };

    let grads = model.backprop(&batch, alpha).unwrap();
    let eps = 1e-6;
    let mut worst = 0.0f64;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-4);
    for l in 0..dims.len() - 1 {
        for k in 0..model.weights()[l].len() {
            let orig = model.weights()[l][k];
            model.weights_mut()[l][k] = orig + eps;
            let cp = model.cost(&batch, alpha).unwrap();
            model.weights_mut()[l][k] = orig - eps;
            let cm = model.cost(&batch, alpha).unwrap();
            model.weights_mut()[l][k] = orig;
            worst = worst.max(rel(grads.weights[l][k], (cp - cm) / (2.0 * eps)));
        }
        for k in 0..model.biases()[l].len() {
            let orig = model.biases()[l][k];
            model.biases_mut()[l][k] = orig + eps;
            let cp = model.cost(&batch, alpha).unwrap();
            model.biases_mut()[l][k] = orig - eps;
            let cm = model.cost(&batch, alpha).unwrap();
            model.biases_mut()[l][k] = orig;
            worst = worst.max(rel(grads.biases[l][k], (cp - cm) / (2.0 * eps)));
        }
    }
    worst
}

/// `y = 3 x1 - 2 x2 + 5` on uniform inputs.
pub struct Linear {
    pub names: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Linear {
    pub fn new(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::with_capacity(2 * n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            x.extend([a, b]);
            y.push(3.0 * a - 2.0 * b + 5.0);
        }
        Linear {
            names: vec!["x1".into(), "x2".into()],
            x,
            y,
        }
    }

    pub fn samples(&self, rows: std::ops::Range<usize>) -> Samples<'_> {
        Samples {
            x: &self.x[2 * rows.start..2 * rows.end],
            y: &self.y[rows],
        }
    }

    pub fn range(&self) -> f64 {
        let max = self.y.iter().copied().fold(f64::MIN, f64::max);
        let min = self.y.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }
}

/// A channel drawn from a range the pseudo-fluid march always handles,
/// marched from a given inlet pressure.
pub fn random_channel(rng: &mut ChaCha8Rng) -> (ChannelGeometry, MarchConfig) {
    let geom = ChannelGeometry::from_area(
        rng.random_range(2.0..8.0),
        rng.random_range(1.0..6.0),
        rng.random_range(0.8..1.2),
        rng.random_range(100.0..250.0),
        rng.random_range(0.2..15.0),
    )
    .unwrap();
    let g = rng.random_range(5_000.0..15_000.0);
    let profile = if rng.random::<bool>() {
        HeatFluxProfile::constant(rng.random_range(0.0..30e6))
    } else {
        HeatFluxProfile::piecewise(vec![
            (0.0, 0.0),
            (rng.random_range(10.0..80.0), rng.random_range(5e6..30e6)),
        ])
        .unwrap()
    };
    let mut cfg = MarchConfig::new(
        g * geom.area_m2(),
        rng.random_range(120.0..300.0),
        PressureBoundary::Inlet(rng.random_range(150e5..280e5)),
        profile,
    );
    cfg.dz = [1.0, 2.0, 3.0][rng.random_range(0..3)];
    (geom, cfg)
}

/// Heat picked up between consecutive stations, summed independently of
/// the solver: `q (b + t_fin) dz / mdot` over every station interval.
pub fn heat_input(geom: &ChannelGeometry, cfg: &MarchConfig, z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| {
            cfg.heat_flux.at(w[0]) * (geom.width + geom.fin_thickness) * 1e-3 * (w[1] - w[0]) * 1e-3 / cfg.mdot
        })
        .sum()
}
