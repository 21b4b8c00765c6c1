//! Churchill friction factor against the laminar law and an iterated
//! Colebrook solution, then a Darcy-Weisbach pressure loss.
//!
//! ```bash
//! cargo run --example friction_factor
//! ```

use coolchan::channel::{darcy_weisbach, friction_factor};

fn colebrook(re: f64, rr: f64) -> f64 {
    let mut x = 0.02f64.powf(-0.5);
    for _ in 0..100 {
        x = -2.0 * (rr / 3.7 + 2.51 * x / re).log10();
    }
    1.0 / (x * x)
}

fn main() -> coolchan::Result<()> {
    println!("laminar:");
    for re in [100.0, 500.0, 1000.0] {
        println!("  Re {re:6}: f = {:.5}, 64/Re = {:.5}", friction_factor(re, 0.0)?, 64.0 / re);
    }
    println!("turbulent (Churchill / Colebrook):");
    for rr in [0.0, 1e-3, 1e-2] {
        for re in [1e4, 1e5, 1e6] {
            let f = friction_factor(re, rr)?;
            let c = colebrook(re, rr);
            println!("  r/D {rr:<6} Re {re:8.0e}: {f:.5} / {c:.5} ({:+.2} %)", 100.0 * (f / c - 1.0));
        }
    }
    let f = friction_factor(2e5, 5e-3)?;
    let dp = darcy_weisbach(f, 300.0, 60.0, 2e-3, 1.5e-3);
    println!("2 mm of a 1.5 mm duct, rho 300 kg/m3, v 60 m/s: dp = {:.0} Pa", dp);
    Ok(())
}
