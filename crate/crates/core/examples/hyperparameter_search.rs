//! Random search over network size, regularisation, minibatch size and
//! learning rate.
//!
//! ```bash
//! cargo run --release --example hyperparameter_search
//! ```

use coolchan::datapipe::{random_search, split, FeatureSpec, SearchSpace};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::neural::HyperParams;
use coolchan::oracle::{generate, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let data = generate(
        &table,
        &GeneratorConfig {
            n_channels: 30,
            rng_seed: 5,
            ..Default::default()
        },
    )?;
    let (train_set, val_set) = split(&data, 0.9, 1)?;

    let space = SearchSpace {
        hidden_layers: (1, 3),
        neurons: (8, 64),
        epochs: 8,
        ..Default::default()
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let trials = random_search(
        &space,
        &HyperParams::default(),
        8,
        &train_set,
        &val_set,
        &FeatureSpec::canonical(),
        42,
        workers,
    )?;
    println!("rank  layers  neurons     alpha  batch        lr   val MAE [K]");
    for (rank, t) in trials.iter().enumerate() {
        println!(
            "{:4} {:7} {:8} {:9.2e} {:6} {:9.2e} {:13.2}",
            rank + 1,
            t.hp.n_hidden_layers,
            t.hp.neurons_per_layer,
            t.hp.alpha_l2,
            t.hp.minibatch_size,
            t.hp.learning_rate,
            t.val_mae
        );
    }
    Ok(())
}
