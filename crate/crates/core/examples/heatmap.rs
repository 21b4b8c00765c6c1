//! Trains a small network and tabulates its wall-temperature response over
//! bulk enthalpy and pressure with the other inputs held fixed.
//!
//! ```bash
//! cargo run --release --example heatmap
//! ```

use coolchan::datapipe::{heatmap_grid, split, FeatureSpec};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::neural::{train, HyperParams};
use coolchan::oracle::{generate, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let data = generate(
        &table,
        &GeneratorConfig {
            n_channels: 60,
            rng_seed: 8,
            ..Default::default()
        },
    )?;
    let (train_set, val_set) = split(&data, 0.9, 0)?;
    let hp = HyperParams {
        n_hidden_layers: 2,
        neurons_per_layer: 64,
        epochs: 25,
        ..Default::default()
    };
    let t = train(&train_set, &val_set, &FeatureSpec::canonical(), &hp, None)?;

    // features: h_b, p_b, G, q, r, A, AR, d, z
    let fixed = [0.0, 0.0, 15_000.0, 30e6, 5.0, 5.0, 3.5, 1.0, 150.0];
    let map = heatmap_grid(&t.model, &t.scaler, "h_b", "p_b", (1.5e5, 9e5), (60e5, 160e5), 8, &fixed)?;

    print!("p [bar] \\ h [kJ/kg]");
    for h in &map.x_values {
        print!("{:>7.0}", h / 1e3);
    }
    println!();
    for (iy, p) in map.y_values.iter().enumerate() {
        print!("{:>19.1}", p / 1e5);
        for ix in 0..map.x_values.len() {
            print!("{:>7.0}", map.at(ix, iy));
        }
        println!();
    }
    Ok(())
}
