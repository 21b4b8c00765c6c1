use approx::assert_relative_eq;
use coolchan::fluidprops::{load_table, make_pseudo_fluid, write_table, PropertyState, PropertyTable, PseudoFluid, T_MAX_EXTENDED};
use proptest::prelude::*;
use std::sync::OnceLock;

fn table() -> &'static PropertyTable {
    static T: OnceLock<PropertyTable> = OnceLock::new();
    T.get_or_init(make_pseudo_fluid)
}

#[test]
fn grid_shape_and_axes() {
    let t = table();
    assert_eq!(t.pressures().len(), 40);
    assert_eq!(t.temperatures().len(), 60);
    assert_relative_eq!(t.p_min(), 40e5);
    assert_relative_eq!(t.p_max(), 300e5);
    assert_relative_eq!(t.t_min(), 90.0);
    assert_relative_eq!(t.t_max_table(), 625.0);
    assert_relative_eq!(t.gas_constant_specific(), 518.3);
}

#[test]
fn every_node_round_trips_through_the_enthalpy_inverse() {
    let t = table();
    for (i, &p) in t.pressures().iter().enumerate() {
        for (j, &temp) in t.temperatures().iter().enumerate() {
            let h = t.node(i, j).h;
            let back = t.temperature_from_enthalpy(p, h).unwrap();
            assert!((back - temp).abs() < 1e-3, "node ({i},{j}): {back} vs {temp}");
        }
    }
}

#[test]
fn node_queries_reproduce_stored_values() {
    let t = table();
    for i in [0, 7, 39] {
        for j in [0, 23, 59] {
            let n = t.node(i, j);
            let q = t.query(n.p, n.t).unwrap();
            assert_relative_eq!(q.rho, n.rho, max_relative = 1e-12);
            assert_relative_eq!(q.h, n.h, max_relative = 1e-12);
            assert_relative_eq!(q.mu, n.mu, max_relative = 1e-12);
        }
    }
}

#[test]
fn enthalpy_inverse_is_monotone_at_80_bar() {
    let t = table();
    let p = 80e5;
    let h_lo = t.query(p, t.t_min()).unwrap().h;
    let h_hi = t.query(p, T_MAX_EXTENDED).unwrap().h;
    let mut prev = f64::NEG_INFINITY;
    for k in 0..200 {
        let h = h_lo + (h_hi - h_lo) * k as f64 / 199.0;
        let temp = t.temperature_from_enthalpy(p, h).unwrap();
        assert!(temp >= prev, "T(h) decreased at sample {k}");
        prev = temp;
    }
}

#[test]
fn ideal_gas_extension_above_the_table() {
    let t = table();
    let (p, temp) = (100e5, t.t_max_table() + 50.0);
    let s = t.query(p, temp).unwrap();
    assert_relative_eq!(s.rho, p / (518.3 * temp), max_relative = 1e-12);
    let edge = t.query(p, t.t_max_table()).unwrap();
    assert_relative_eq!(s.h, edge.h + edge.cp * 50.0, max_relative = 1e-12);
}

#[test]
fn out_of_table_queries_are_rejected() {
    let t = table();
    assert!(t.query(39e5, 300.0).is_err());
    assert!(t.query(301e5, 300.0).is_err());
    assert!(t.query(100e5, 89.0).is_err());
    assert!(t.query(100e5, T_MAX_EXTENDED + 1.0).is_err());
    assert!(t.temperature_from_enthalpy(100e5, -1e9).is_err());
}

#[test]
fn written_table_loads_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    write_table(table(), &path).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back.pressures(), table().pressures());
    assert_eq!(back.temperatures(), table().temperatures());
    for i in [0, 20, 39] {
        for j in [0, 30, 59] {
            assert_eq!(back.node(i, j), table().node(i, j));
        }
    }
}

#[test]
fn pseudo_fluid_density_drops_across_the_pseudo_critical_line() {
    let f = PseudoFluid::default();
    let p = 80e5;
    let tpc = f.t_pc(p);
    assert!(f.rho(p, tpc - 20.0) > 2.0 * f.rho(p, tpc + 20.0));
    assert!(f.cp(p, tpc) > f.cp(p, tpc - 40.0));
    assert!(f.cp(p, tpc) > f.cp(p, tpc + 40.0));
}

fn locate(axis: &[f64], x: f64) -> usize {
    axis.windows(2).position(|w| x <= w[1]).unwrap_or(axis.len() - 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn interpolation_stays_within_cell_corners(p in 40e5f64..300e5, temp in 90.0f64..625.0) {
        let t = table();
        let i = locate(t.pressures(), p);
        let j = locate(t.temperatures(), temp);
        let s = t.query(p, temp).unwrap();
        let corners = [t.node(i, j), t.node(i + 1, j), t.node(i, j + 1), t.node(i + 1, j + 1)];
        let fields: [fn(&PropertyState) -> f64; 5] =
            [|n| n.rho, |n| n.h, |n| n.mu, |n| n.k, |n| n.cp];
        for f in fields {
            let lo = corners.iter().map(f).fold(f64::MAX, f64::min);
            let hi = corners.iter().map(f).fold(f64::MIN, f64::max);
            let v = f(&s);
            let slack = 1e-12 * hi.abs().max(lo.abs());
            prop_assert!(v >= lo - slack && v <= hi + slack, "{v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn enthalpy_round_trip(p in 40e5f64..300e5, temp in 90.0f64..2000.0) {
        let t = table();
        let h = t.query(p, temp).unwrap().h;
        let back = t.temperature_from_enthalpy(p, h).unwrap();
        prop_assert!((back - temp).abs() <= 1e-6 * temp, "{back} vs {temp}");
    }

    #[test]
    fn branches_agree_at_the_table_edge(p in 40e5f64..300e5) {
        let t = table();
        // last tabulated state vs the ideal-gas branch one ulp above it
        let t_max = t.t_max_table();
        let edge = (t.query(p, t_max).unwrap(), t.query(p, t_max * (1.0 + f64::EPSILON)).unwrap());
        prop_assert!((edge.0.rho - edge.1.rho).abs() <= 1e-12 * edge.0.rho);
        prop_assert!((edge.0.h - edge.1.h).abs() <= 1e-9 * edge.0.h.abs().max(1.0));
        prop_assert!((edge.0.mu - edge.1.mu).abs() <= 1e-12 * edge.0.mu);
    }

    #[test]
    fn enthalpy_increases_with_temperature(p in 40e5f64..300e5, t1 in 90.0f64..2000.0, dt in 0.01f64..100.0) {
        let t = table();
        let t2 = (t1 + dt).min(T_MAX_EXTENDED);
        prop_assume!(t2 > t1);
        prop_assert!(t.query(p, t2).unwrap().h > t.query(p, t1).unwrap().h);
    }
}
