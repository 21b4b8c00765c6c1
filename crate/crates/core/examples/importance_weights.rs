//! Covariate shift: weights training rows by the density ratio between a
//! hot, near-critical target population and the training data, then trains
//! with and without the weights.
//!
//! ```bash
//! cargo run --release --example importance_weights
//! ```

use coolchan::datapipe::{dataset_importance_weights, evaluate, split, FeatureSpec, Field, WEIGHT_CLIP};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::neural::{train, HyperParams};
use coolchan::oracle::{generate, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let data = generate(
        &table,
        &GeneratorConfig {
            n_channels: 50,
            rng_seed: 21,
            ..Default::default()
        },
    )?;
    // the deployment population sits near the pseudo-critical point at high flux
    let target = generate(
        &table,
        &GeneratorConfig {
            n_channels: 12,
            rng_seed: 22,
            near_critical_fraction: 1.0,
            heat_flux_mw: (40.0, 80.0),
            ..Default::default()
        },
    )?;
    let (train_set, val_set) = split(&data, 0.9, 0)?;
    let spec = FeatureSpec::canonical();

    // the shift lives in the thermodynamic state, so estimate densities there
    let shifted = FeatureSpec::from_fields(&[Field::Hb, Field::Pb, Field::Q])?;
    let w = dataset_importance_weights(&train_set, &target, &shifted, None)?;
    let mut sorted = w.clone();
    sorted.sort_by(f64::total_cmp);
    println!(
        "weights (clipped to [{}, {}], mean 1): min {:.3}, median {:.3}, max {:.3}",
        WEIGHT_CLIP.0,
        WEIGHT_CLIP.1,
        sorted[0],
        sorted[sorted.len() / 2],
        sorted[sorted.len() - 1]
    );

    let hp = HyperParams {
        n_hidden_layers: 2,
        neurons_per_layer: 64,
        epochs: 20,
        ..Default::default()
    };
    for (label, weights) in [("unweighted", None), ("weighted", Some(w.as_slice()))] {
        let t = train(&train_set, &val_set, &spec, &hp, weights)?;
        let ev = evaluate(&t.model, &t.scaler, &target)?;
        println!("{label:>10}: target-population MAE {:.2} K", ev.mae);
    }
    Ok(())
}
