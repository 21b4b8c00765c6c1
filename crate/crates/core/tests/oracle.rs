use approx::assert_relative_eq;
use coolchan::channel::{march, ChannelGeometry, HeatFluxProfile, MarchConfig, PressureBoundary};
use coolchan::datapipe::Field;
use coolchan::fluidprops::{make_pseudo_fluid, PropertyTable};
use coolchan::io_util::sha256_hex;
use coolchan::oracle::{
    fin_efficiency, generate_channels, heat_transfer_coefficient, station_heat, wall_superheat, wall_temperatures,
    GeneratorConfig, StationHeat,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn table() -> &'static PropertyTable {
    static T: OnceLock<PropertyTable> = OnceLock::new();
    T.get_or_init(make_pseudo_fluid)
}

fn base_station() -> StationHeat {
    StationHeat {
        re: 2e5,
        pr: 1.2,
        k: 0.08,
        dh: 1.5e-3,
        roughness: 5e-6,
        q: 30e6,
        q_wetted: 15e6,
        wall_thickness: 1e-3,
        fin_thickness: 1e-3,
        fin_height: 3e-3,
    }
}

fn small_config(n: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        n_channels: n,
        rng_seed: seed,
        ..Default::default()
    }
}

/// Wall temperature written out from the label definition, independent of
/// the library's helper functions.
fn hand_wall_temperature(t_b: f64, re: f64, pr: f64, k: f64, geom: &ChannelGeometry, q: f64) -> f64 {
    let mm = 1e-3;
    let (b, h, t, fin) = (geom.width * mm, geom.height * mm, geom.wall_thickness * mm, geom.fin_thickness * mm);
    let dh = 2.0 * b * h / (b + h);
    let r = geom.roughness * 1e-6;
    let alpha = 0.023 * k / dh * re.powf(0.8) * pr.powf(0.4) * (1.0 + 3.0 * (r / dh).powf(0.3));
    let m = (2.0 * alpha / (340.0 * fin)).sqrt();
    let eta = (m * h).tanh() / (m * h);
    let q_w = q * (b + fin) / (b + 2.0 * h);
    t_b + q_w / (alpha * eta) + q * t / 340.0
}

#[test]
fn labels_match_the_hand_written_definition() {
    let geom = ChannelGeometry::from_area(4.0, 3.0, 1.1, 250.0, 8.0).unwrap();
    let mut cfg = MarchConfig::new(
        15_000.0 * geom.area_m2(),
        140.0,
        PressureBoundary::Inlet(150e5),
        HeatFluxProfile::constant(40e6),
    );
    cfg.dz = 5.0;
    let states = march(table(), &geom, &cfg).unwrap();
    let tw = wall_temperatures(table(), &geom, &cfg, &states).unwrap();
    for (s, t) in states.iter().zip(&tw) {
        let props = table().query(s.p, s.t_b).unwrap();
        let expected = hand_wall_temperature(s.t_b, s.re, props.prandtl(), props.k, &geom, 40e6);
        assert_relative_eq!(*t, expected, max_relative = 1e-12);
    }
}

#[test]
fn zero_heat_flux_leaves_the_wall_at_bulk_temperature() {
    let geom = ChannelGeometry::from_area(5.0, 3.5, 1.0, 250.0, 5.0).unwrap();
    let cfg = MarchConfig::new(
        17_500.0 * geom.area_m2(),
        150.0,
        PressureBoundary::Inlet(120e5),
        HeatFluxProfile::constant(0.0),
    );
    let states = march(table(), &geom, &cfg).unwrap();
    let tw = wall_temperatures(table(), &geom, &cfg, &states).unwrap();
    for (s, t) in states.iter().zip(&tw) {
        assert_eq!(*t, s.t_b);
    }
}

#[test]
fn wall_temperature_rises_with_heat_flux_and_thickness() {
    let mut prev = 0.0;
    for q in [1e6, 10e6, 30e6, 60e6, 80e6] {
        let dt = wall_superheat(&StationHeat { q, q_wetted: 0.5 * q, ..base_station() });
        assert!(dt > prev);
        prev = dt;
    }
    let mut prev = 0.0;
    for d in [0.8e-3, 0.9e-3, 1.0e-3, 1.2e-3] {
        let dt = wall_superheat(&StationHeat { wall_thickness: d, ..base_station() });
        assert!(dt > prev);
        prev = dt;
    }
}

#[test]
fn wall_temperature_falls_with_roughness_and_mass_flux() {
    let mut prev = f64::INFINITY;
    for r in [0.2e-6, 1e-6, 5e-6, 15e-6] {
        let dt = wall_superheat(&StationHeat { roughness: r, ..base_station() });
        assert!(dt < prev);
        prev = dt;
    }
    // Reynolds number scales with G at a fixed state
    let mut prev = f64::INFINITY;
    for g in [3000.0, 10000.0, 20000.0, 35000.0] {
        let dt = wall_superheat(&StationHeat { re: 2e5 * g / 17500.0, ..base_station() });
        assert!(dt < prev);
        prev = dt;
    }
}

#[test]
fn fin_efficiency_limits() {
    assert!((fin_efficiency(1e-6, 1e-3, 1e-3) - 1.0).abs() < 1e-9);
    let eta = fin_efficiency(1e8, 1e-3, 5e-3);
    assert!(eta > 0.0 && eta < 0.01);
    let alpha = heat_transfer_coefficient(&base_station());
    let eta = fin_efficiency(alpha, 1e-3, 3e-3);
    assert!(eta > 0.0 && eta < 1.0);
}

#[test]
fn station_heat_uses_si_geometry() {
    let geom = ChannelGeometry::from_area(4.0, 1.0, 1.0, 250.0, 10.0).unwrap();
    let cfg = MarchConfig::new(10_000.0 * geom.area_m2(), 150.0, PressureBoundary::Inlet(150e5), HeatFluxProfile::constant(20e6));
    let s = march(table(), &geom, &cfg).unwrap()[0];
    let h = station_heat(table(), &geom, &s, 20e6).unwrap();
    assert_relative_eq!(h.dh, 2e-3, max_relative = 1e-12);
    assert_relative_eq!(h.roughness, 10e-6, max_relative = 1e-12);
    // b + t_fin = 3 mm of pitch over b + 2h = 6 mm of wetted wall
    assert_relative_eq!(h.q_wetted, 10e6, max_relative = 1e-12);
}

#[test]
fn generation_is_reproducible_and_thread_independent() {
    let cfg = small_config(12, 3);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| generate_channels(table(), &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(sha256_hex(a.dataset.to_csv().as_bytes()), sha256_hex(b.dataset.to_csv().as_bytes()));
    let c = generate_channels(table(), &small_config(12, 4)).unwrap();
    assert_ne!(a.dataset.to_csv(), c.dataset.to_csv());
}

#[test]
fn twins_share_everything_but_mirrored_roughness() {
    let cfg = small_config(8, 11);
    let g = generate_channels(table(), &cfg).unwrap();
    let (lo, hi) = cfg.roughness_um;
    for pair in g.channels.chunks(2).filter(|p| p.len() == 2 && p[1].index == p[0].index + 1 && p[0].index % 2 == 0) {
        let (a, b) = (&pair[0], &pair[1]);
        assert_eq!(a.geometry.width, b.geometry.width);
        assert_eq!(a.geometry.height, b.geometry.height);
        assert_eq!(a.config.mdot, b.config.mdot);
        assert_eq!(a.config.t_in, b.config.t_in);
        assert_relative_eq!(a.geometry.roughness + b.geometry.roughness, lo + hi, max_relative = 1e-12);
    }
}

#[test]
fn generated_data_stays_inside_the_sampling_envelope() {
    let cfg = small_config(40, 5);
    let g = generate_channels(table(), &cfg).unwrap();
    assert!(g.skipped.len() * 5 <= cfg.n_channels, "{} skipped", g.skipped.len());
    let ds = &g.dataset;
    let within = |f: Field, lo: f64, hi: f64| {
        let c = ds.column(f).unwrap();
        assert!(c.iter().all(|v| *v >= lo && *v <= hi), "{} outside [{lo}, {hi}]", f.name());
    };
    within(Field::R, 0.2, 15.0);
    within(Field::A, 1.0, 10.0);
    within(Field::Ar, 1.0, 9.2);
    within(Field::D, 0.8, 1.2);
    within(Field::Q, 9e6, 80e6);
    within(Field::G, 3000.0, 35000.0);
    within(Field::Pb, 50e5, 300e5);
    let tw = ds.labels().unwrap();
    let mean = tw.iter().sum::<f64>() / tw.len() as f64;
    assert!((200.0..=1500.0).contains(&mean), "mean wall temperature {mean}");
    for c in &g.channels {
        assert_eq!(c.rows.len(), 126);
        let PressureBoundary::Outlet(p_out) = c.config.pressure else {
            panic!("generator channels are outlet-pressure bounded");
        };
        assert!((c.states.last().unwrap().p - p_out).abs() < 100.0);
        assert!(c.wall_temperatures.iter().zip(&c.states).all(|(t, s)| *t > s.t_b));
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(generate_channels(table(), &small_config(0, 0)).is_err());
    let bad = GeneratorConfig { heat_flux_mw: (80.0, 9.0), ..small_config(2, 0) };
    assert!(generate_channels(table(), &bad).is_err());
    let off_table = GeneratorConfig { p_out_bar: (10.0, 20.0), ..small_config(2, 0) };
    assert!(generate_channels(table(), &off_table).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn superheat_is_linear_in_heat_flux(q in 1e5f64..1e8, scale in 0.1f64..10.0) {
        let s = |q: f64| wall_superheat(&StationHeat { q, q_wetted: 0.5 * q, ..base_station() });
        prop_assert!((s(scale * q) - scale * s(q)).abs() <= 1e-9 * s(scale * q));
    }

    #[test]
    fn heat_transfer_coefficient_is_positive(re in 1e3f64..1e7, pr in 0.5f64..20.0, r in 0.0f64..20e-6) {
        let a = heat_transfer_coefficient(&StationHeat { re, pr, roughness: r, ..base_station() });
        prop_assert!(a > 0.0 && a.is_finite());
    }
}
