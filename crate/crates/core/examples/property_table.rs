//! Builds the pseudo-fluid property table, queries it across the
//! pseudo-critical line and round-trips it through CSV.
//!
//! ```bash
//! cargo run --example property_table
//! ```

use coolchan::fluidprops::{load_table, make_pseudo_fluid, write_table};

fn main() -> coolchan::Result<()> {
    let table = make_pseudo_fluid();
    println!(
        "{} x {} nodes, p {:.0}-{:.0} bar, T {:.0}-{:.0} K (ideal gas above)",
        table.pressures().len(),
        table.temperatures().len(),
        table.p_min() / 1e5,
        table.p_max() / 1e5,
        table.t_min(),
        table.t_max_table()
    );

    let p = 60e5;
    println!("\n  T [K]   rho [kg/m3]   h [kJ/kg]   cp [J/kg.K]   Pr");
    for t in [150.0, 180.0, 190.0, 200.0, 220.0, 300.0, 600.0, 900.0] {
        let s = table.query(p, t)?;
        println!(
            "{:7.1} {:12.2} {:11.1} {:13.0} {:6.2}",
            t,
            s.rho,
            s.h / 1e3,
            s.cp,
            s.prandtl()
        );
    }

    let h = table.query(p, 205.0)?.h;
    println!("\nT(p = 60 bar, h = {:.1} kJ/kg) = {:.6} K", h / 1e3, table.temperature_from_enthalpy(p, h)?);

    let dir = tempfile::tempdir().expect("temporary directory");
    let path = dir.path().join("pseudo_fluid.csv");
    write_table(&table, &path)?;
    let back = load_table(&path)?;
    println!("CSV round trip exact: {}", back == table);
    Ok(())
}
