//! Marches a heated channel (operating point of a published test case) with
//! the outlet pressure fixed and checks the energy balance.
//!
//! ```bash
//! cargo run --example march_channel
//! ```

use coolchan::channel::{march, ChannelGeometry, HeatFluxProfile, MarchConfig, PressureBoundary};
use coolchan::fluidprops::make_pseudo_fluid;

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    let geom = ChannelGeometry::from_area(7.4, 3.7, 1.14, 250.0, 1.7)?;
    let cfg = MarchConfig::new(
        10_100.0 * geom.area_m2(),
        290.0,
        PressureBoundary::Outlet(51e5),
        HeatFluxProfile::constant(14e6),
    );
    println!(
        "b = {:.3} mm, h = {:.3} mm, D_h = {:.3} mm, mdot = {:.4} g/s",
        geom.width,
        geom.height,
        geom.hydraulic_diameter(),
        cfg.mdot * 1e3
    );

    let states = march(&table, &geom, &cfg)?;
    println!("\n z [mm]   p [bar]   T_b [K]   v [m/s]        Re       f");
    for s in states.iter().step_by(25) {
        println!(
            "{:7.0} {:9.3} {:9.2} {:9.2} {:9.0} {:7.4}",
            s.z,
            s.p / 1e5,
            s.t_b,
            s.v,
            s.re,
            s.f
        );
    }

    let (first, last) = (states[0], states[states.len() - 1]);
    let heat = 14e6 * geom.pitch_m() * geom.length * 1e-3 / cfg.mdot;
    println!(
        "\n{} stations; total enthalpy rise {:.3} kJ/kg, heat input {:.3} kJ/kg",
        states.len(),
        (last.h_tot - first.h_tot) / 1e3,
        heat / 1e3
    );
    Ok(())
}
