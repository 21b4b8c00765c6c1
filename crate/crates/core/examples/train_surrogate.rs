//! Trains the wall-temperature network on synthetic channels, evaluates it
//! on freshly generated channels and round-trips the model file.
//!
//! ```bash
//! cargo run --release --example train_surrogate
//! ```

use coolchan::datapipe::{evaluate, split, FeatureSpec};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::neural::{load_model, save_model, train, HyperParams};
use coolchan::oracle::{generate, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let data = generate(
        &table,
        &GeneratorConfig {
            n_channels: 60,
            rng_seed: 11,
            ..Default::default()
        },
    )?;
    let (train_set, val_set) = split(&data, 0.9, 0)?;
    println!("{} training and {} validation rows", train_set.len(), val_set.len());

    let hp = HyperParams {
        n_hidden_layers: 2,
        neurons_per_layer: 64,
        epochs: 30,
        ..Default::default()
    };
    let spec = FeatureSpec::canonical();
    let trained = train(&train_set, &val_set, &spec, &hp, None)?;
    for e in trained.report.epochs.iter().filter(|e| e.epoch % 5 == 0) {
        println!(
            "epoch {:3}: cost {:.5}, validation MAE {:6.2} K (std {:6.2} K)",
            e.epoch, e.train_cost, e.val_mae, e.val_std
        );
    }

    let test = generate(
        &table,
        &GeneratorConfig {
            n_channels: 10,
            channels_per_geometry: 5,
            rng_seed: 12,
            ..Default::default()
        },
    )?;
    let ev = evaluate(&trained.model, &trained.scaler, &test)?;
    println!("held-out channels: MAE {:.2} K, std {:.2} K, MAPE {:.2} %", ev.mae, ev.std, ev.mape);

    let dir = tempfile::tempdir().expect("temporary directory");
    let path = dir.path().join("model.json");
    save_model(&trained.model, &trained.scaler, &path)?;
    let (model, scaler) = load_model(&path)?;
    println!(
        "model file reloaded, weights identical: {}",
        model.checksum() == trained.model.checksum() && scaler == trained.scaler
    );
    Ok(())
}
