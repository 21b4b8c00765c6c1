//! The reduced-order model: march a new channel with the 1-D solver and feed
//! every station to the trained network, then compare with the synthetic
//! ground truth of the same channel.
//!
//! ```bash
//! cargo run --release --example hybrid_prediction
//! ```

use std::time::Instant;

use coolchan::channel::{predict_channel, ChannelGeometry, HeatFluxProfile, MarchConfig, PressureBoundary};
use coolchan::datapipe::{split, FeatureSpec};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::neural::{train, HyperParams};
use coolchan::oracle::{generate, wall_temperatures, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let data = generate(
        &table,
        &GeneratorConfig {
            n_channels: 80,
            rng_seed: 4,
            ..Default::default()
        },
    )?;
    let (train_set, val_set) = split(&data, 0.9, 0)?;
    let hp = HyperParams {
        n_hidden_layers: 2,
        neurons_per_layer: 64,
        epochs: 30,
        ..Default::default()
    };
    let t = train(&train_set, &val_set, &FeatureSpec::canonical(), &hp, None)?;

    let geom = ChannelGeometry::from_area(4.0, 3.0, 0.9, 250.0, 3.0)?;
    let cfg = MarchConfig::new(
        20_000.0 * geom.area_m2(),
        170.0,
        PressureBoundary::Outlet(80e5),
        HeatFluxProfile::constant(35e6),
    );
    let start = Instant::now();
    let rows = predict_channel(&table, &geom, &cfg, &t.model, &t.scaler)?;
    let elapsed = start.elapsed();

    let states: Vec<_> = rows.iter().map(|r| r.0).collect();
    let truth = wall_temperatures(&table, &geom, &cfg, &states)?;
    println!(" z [mm]   T_b [K]   T_w ROM [K]   T_w oracle [K]");
    for (i, (s, tw)) in rows.iter().enumerate().step_by(25) {
        println!("{:7.0} {:9.1} {:13.1} {:16.1}", s.z, s.t_b, tw, truth[i]);
    }
    let mae = rows.iter().zip(&truth).map(|(r, y)| (r.1 - y).abs()).sum::<f64>() / truth.len() as f64;
    println!(
        "{} stations in {:.2} ms, MAE against the oracle {:.2} K",
        rows.len(),
        elapsed.as_secs_f64() * 1e3,
        mae
    );
    Ok(())
}
