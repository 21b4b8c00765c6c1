//! Generates a small synthetic dataset, prints its percentile summary and
//! the correlation of each input with the wall temperature.
//!
//! ```bash
//! cargo run --release --example generate_dataset
//! ```

use coolchan::datapipe::{correlation_matrix, stats_summary, Field};
use coolchan::fluidprops::make_pseudo_fluid;
use coolchan::oracle::{generate_channels, GeneratorConfig};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let cfg = GeneratorConfig {
        n_channels: 40,
        rng_seed: 3,
        ..Default::default()
    };
    let g = generate_channels(&table, &cfg)?;
    println!("{} rows from {} channels", g.dataset.len(), g.channels.len());
    for s in &g.skipped {
        println!("skipped channel {}: {}", s.index, s.reason);
    }

    println!("\n{:>12} {:>12} {:>12} {:>12} {:>12}", "column", "mean", "p1", "p50", "p99");
    for c in stats_summary(&g.dataset)? {
        println!(
            "{:>12} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            c.field.header(),
            c.mean,
            c.percentiles[0],
            c.percentiles[2],
            c.percentiles[4]
        );
    }

    let cols = [Field::Q, Field::G, Field::R, Field::D, Field::Hb, Field::Tw];
    let m = correlation_matrix(&g.dataset, &cols)?;
    println!();
    for (i, f) in cols[..cols.len() - 1].iter().enumerate() {
        println!("corr({:>3}, T_w) = {:+.3}", f.name(), m[i][cols.len() - 1]);
    }
    Ok(())
}
