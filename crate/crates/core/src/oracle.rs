//! Synthetic labelled data: samples channel geometries and operating
//! points, marches each channel and labels every station with a closed-form
//! wall-temperature model.
//!
//! The label model is a Dittus-Boelter type correlation with a roughness
//! enhancement and a straight-fin efficiency, plus one-dimensional conduction
//! through the hot-gas wall:
//!
//! ```text
//! α     = C (k/D_h) Re^0.8 Pr^0.4 (1 + c_r (r/D_h)^0.3)
//! α_eff = α η_fin,   η_fin = tanh(mL)/(mL),  m = sqrt(2α / (k_s t_fin)),  L = h
//! q_w   = q (b + t_fin) / (b + 2h)
//! T_w   = T_b + q_w/α_eff + q d/k_s
//! ```
//!
//! Properties (k, Pr) are evaluated at the bulk state, so property swings
//! across the pseudo-critical line show up as wall-temperature peaks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::channel::{march, station_record, ChannelGeometry, FlowState, HeatFluxProfile, MarchConfig, PressureBoundary};
use crate::datapipe::{Dataset, Provenance};
use crate::error::{Error, Result};
use crate::fluidprops::PropertyTable;

pub const NUSSELT_COEFF: f64 = 0.023;
pub const ROUGHNESS_COEFF: f64 = 3.0;
/// Thermal conductivity of the channel wall [W/(m K)].
pub const K_SOLID: f64 = 340.0;

const BAR: f64 = 1e5;

/// Inputs of the label formula for one station, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationHeat {
    pub re: f64,
    pub pr: f64,
    /// Coolant conductivity [W/(m K)].
    pub k: f64,
    pub dh: f64,
    pub roughness: f64,
    /// Hot-gas side heat flux [W/m²].
    pub q: f64,
    /// Heat flux through the wetted perimeter [W/m²].
    pub q_wetted: f64,
    pub wall_thickness: f64,
    pub fin_thickness: f64,
    pub fin_height: f64,
}

/// Coolant-side heat transfer coefficient without fin correction [W/(m² K)].
pub fn heat_transfer_coefficient(h: &StationHeat) -> f64 {
    NUSSELT_COEFF * (h.k / h.dh) * h.re.powf(0.8) * h.pr.powf(0.4)
        * (1.0 + ROUGHNESS_COEFF * (h.roughness / h.dh).powf(0.3))
}

/// Straight-fin efficiency `tanh(mL)/(mL)` with `m = sqrt(2α/(k_s t))`.
pub fn fin_efficiency(alpha: f64, fin_thickness: f64, fin_height: f64) -> f64 {
    let ml = (2.0 * alpha / (K_SOLID * fin_thickness)).sqrt() * fin_height;
    if ml < 1e-8 {
        1.0
    } else {
        ml.tanh() / ml
    }
}

/// Wall superheat `T_w - T_b` [K] for the given fin efficiency.
pub fn wall_superheat_with(h: &StationHeat, eta_fin: f64) -> f64 {
    let alpha_eff = heat_transfer_coefficient(h) * eta_fin;
    h.q_wetted / alpha_eff + h.q * h.wall_thickness / K_SOLID
}

pub fn wall_superheat(h: &StationHeat) -> f64 {
    let alpha = heat_transfer_coefficient(h);
    wall_superheat_with(h, fin_efficiency(alpha, h.fin_thickness, h.fin_height))
}

/// Label-formula inputs at a marched station.
pub fn station_heat(table: &PropertyTable, geom: &ChannelGeometry, state: &FlowState, q: f64) -> Result<StationHeat> {
    let props = table.query(state.p, state.t_b)?;
    let mm = 1e-3;
    Ok(StationHeat {
        re: state.re,
        pr: props.prandtl(),
        k: props.k,
        dh: geom.hydraulic_diameter_m(),
        roughness: geom.roughness * 1e-6,
        q,
        q_wetted: q * (geom.width + geom.fin_thickness) / (geom.width + 2.0 * geom.height),
        wall_thickness: geom.wall_thickness * mm,
        fin_thickness: geom.fin_thickness * mm,
        fin_height: geom.height * mm,
    })
}

/// Noise-free wall temperature [K] at every station of a marched channel.
pub fn wall_temperatures(
    table: &PropertyTable,
    geom: &ChannelGeometry,
    cfg: &MarchConfig,
    states: &[FlowState],
) -> Result<Vec<f64>> {
    states
        .iter()
        .map(|s| Ok(s.t_b + wall_superheat(&station_heat(table, geom, s, cfg.heat_flux.at(s.z))?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorConfig {
    pub n_channels: usize,
    /// Consecutive channels sharing one geometry draw.
    pub channels_per_geometry: usize,
    pub p_out_bar: (f64, f64),
    pub t_in: (f64, f64),
    pub roughness_um: (f64, f64),
    pub area_mm2: (f64, f64),
    pub aspect_ratio: (f64, f64),
    pub wall_thickness_mm: (f64, f64),
    /// Heat flux [MW/m²].
    pub heat_flux_mw: (f64, f64),
    /// Mass flow density [kg/(m² s)].
    pub mass_flux: (f64, f64),
    /// Probability of drawing the outlet pressure and inlet temperature from
    /// the narrow bands around the pseudo-critical point.
    pub near_critical_fraction: f64,
    pub near_critical_p_bar: (f64, f64),
    /// Half-width [K] of the inlet-temperature band around the
    /// pseudo-critical temperature.
    pub near_critical_dt: f64,
    /// Run geometry groups in twins that share every draw except roughness,
    /// which is mirrored about the middle of its range. This balances
    /// roughness against all other factors.
    pub paired_roughness: bool,
    /// Operating points whose inlet velocity or total enthalpy rise exceed
    /// these bounds are redrawn.
    pub max_inlet_velocity: f64,
    pub max_enthalpy_rise: f64,
    pub length_mm: f64,
    pub dz: f64,
    /// Internal march sub-steps; the labels come from this refined march.
    pub substeps: usize,
    pub label_noise_std: f64,
    pub rng_seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_channels: 100,
            channels_per_geometry: 1,
            p_out_bar: (50.0, 150.0),
            t_in: (120.0, 400.0),
            roughness_um: (0.2, 15.0),
            area_mm2: (1.0, 10.0),
            aspect_ratio: (1.0, 9.2),
            wall_thickness_mm: (0.8, 1.2),
            heat_flux_mw: (9.0, 80.0),
            mass_flux: (3000.0, 35000.0),
            near_critical_fraction: 0.3,
            near_critical_p_bar: (50.0, 70.0),
            near_critical_dt: 25.0,
            paired_roughness: true,
            max_inlet_velocity: 200.0,
            max_enthalpy_rise: 8.0e5,
            length_mm: 250.0,
            dz: MarchConfig::DEFAULT_DZ,
            substeps: 4,
            label_noise_std: 0.0,
            rng_seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self, table: &PropertyTable) -> Result<()> {
        if self.n_channels == 0 {
            return Err(Error::Validation("n_channels must be at least 1".into()));
        }
        if self.channels_per_geometry == 0 {
            return Err(Error::Validation("channels_per_geometry must be at least 1".into()));
        }
        let ranges = [
            ("p_out_bar", self.p_out_bar),
            ("t_in", self.t_in),
            ("roughness_um", self.roughness_um),
            ("area_mm2", self.area_mm2),
            ("aspect_ratio", self.aspect_ratio),
            ("wall_thickness_mm", self.wall_thickness_mm),
            ("heat_flux_mw", self.heat_flux_mw),
            ("mass_flux", self.mass_flux),
            ("near_critical_p_bar", self.near_critical_p_bar),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::Validation(format!("{name} range must satisfy 0 < lo <= hi, got ({lo}, {hi})")));
            }
        }
        for (name, (lo, hi)) in [("p_out_bar", self.p_out_bar), ("near_critical_p_bar", self.near_critical_p_bar)] {
            if lo * BAR < table.p_min() || hi * BAR > table.p_max() {
                return Err(Error::Validation(format!(
                    "{name} ({lo}, {hi}) bar lies outside the property table"
                )));
            }
        }
        if self.t_in.0 < table.t_min() || self.t_in.1 > table.t_max_table() {
            return Err(Error::Validation(format!(
                "inlet temperature range ({}, {}) K lies outside the property table",
                self.t_in.0, self.t_in.1
            )));
        }
        if !(0.0..=1.0).contains(&self.near_critical_fraction) {
            return Err(Error::Validation("near_critical_fraction must lie in [0, 1]".into()));
        }
        if !(self.label_noise_std >= 0.0 && self.label_noise_std.is_finite()) {
            return Err(Error::Validation("label_noise_std must be >= 0".into()));
        }
        if !(self.length_mm > 0.0 && self.dz > 0.0 && self.substeps > 0) {
            return Err(Error::Validation("length, dz and substeps must be positive".into()));
        }
        if !(self.max_inlet_velocity > 0.0 && self.max_enthalpy_rise > 0.0) {
            return Err(Error::Validation("feasibility bounds must be positive".into()));
        }
        Ok(())
    }
}

/// One generated channel and the dataset rows it produced.
#[derive(Debug, Clone)]
pub struct ChannelCase {
    pub index: usize,
    pub geometry: ChannelGeometry,
    pub config: MarchConfig,
    pub states: Vec<FlowState>,
    /// Noise-free wall temperatures, one per station.
    pub wall_temperatures: Vec<f64>,
    pub rows: std::ops::Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedChannel {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub dataset: Dataset,
    pub channels: Vec<ChannelCase>,
    pub skipped: Vec<SkippedChannel>,
}

const MAX_DRAWS: usize = 10_000;

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_geometry(cfg: &GeneratorConfig, group: usize) -> Result<ChannelGeometry> {
    let (key, mirrored) = if cfg.paired_roughness {
        (group / 2, group % 2 == 1)
    } else {
        (group, false)
    };
    let mut rng = stream_rng(cfg.rng_seed, 2 * key as u64);
    let area = uniform(&mut rng, cfg.area_mm2);
    // the smallest sections are only manufacturable as squares
    let ar = if area < 1.5 { 1.0 } else { uniform(&mut rng, cfg.aspect_ratio) };
    let mut roughness = uniform(&mut rng, cfg.roughness_um);
    if mirrored {
        roughness = cfg.roughness_um.0 + cfg.roughness_um.1 - roughness;
    }
    let d = uniform(&mut rng, cfg.wall_thickness_mm);
    ChannelGeometry::from_area(area, ar, d, cfg.length_mm, roughness)
}

/// Random stream of the operating point of channel `index`; twins share it.
fn operating_key(cfg: &GeneratorConfig, index: usize) -> usize {
    if cfg.paired_roughness {
        let (group, k) = (index / cfg.channels_per_geometry, index % cfg.channels_per_geometry);
        (group / 2) * cfg.channels_per_geometry + k
    } else {
        index
    }
}

fn pseudo_critical_temperature(table: &PropertyTable, p: f64) -> Option<f64> {
    let ts = table.temperatures();
    let mut best: Option<(f64, f64)> = None;
    for w in ts.windows(2) {
        let (a, b) = (table.query(p, w[0]).ok()?, table.query(p, w[1]).ok()?);
        let cp = (b.h - a.h) / (w[1] - w[0]);
        if best.is_none_or(|(c, _)| cp > c) {
            best = Some((cp, 0.5 * (w[0] + w[1])));
        }
    }
    best.map(|b| b.1)
}

fn draw_operating_point(
    table: &PropertyTable,
    cfg: &GeneratorConfig,
    geom: &ChannelGeometry,
    index: usize,
) -> Result<Option<MarchConfig>> {
    let mut rng = stream_rng(cfg.rng_seed, 2 * operating_key(cfg, index) as u64 + 1);
    let area = geom.area_m2();
    let heated = geom.pitch_m() * geom.length * 1e-3;
    for _ in 0..MAX_DRAWS {
        let near = rng.random::<f64>() < cfg.near_critical_fraction;
        let (p_out, t_in) = if near {
            let p = uniform(&mut rng, cfg.near_critical_p_bar) * BAR;
            let tpc = pseudo_critical_temperature(table, p).unwrap_or(0.5 * (cfg.t_in.0 + cfg.t_in.1));
            let lo = (tpc - cfg.near_critical_dt).max(cfg.t_in.0);
            let hi = (tpc + cfg.near_critical_dt).min(cfg.t_in.1);
            (p, uniform(&mut rng, (lo.min(hi), hi)))
        } else {
            (uniform(&mut rng, cfg.p_out_bar) * BAR, uniform(&mut rng, cfg.t_in))
        };
        let q = uniform(&mut rng, cfg.heat_flux_mw) * 1e6;
        let g = uniform(&mut rng, cfg.mass_flux);

        let rho = table.query(p_out, t_in)?.rho;
        let mdot = g * area;
        if g / rho > cfg.max_inlet_velocity || q * heated / mdot > cfg.max_enthalpy_rise {
            continue;
        }
        let mut mc = MarchConfig::new(mdot, t_in, PressureBoundary::Outlet(p_out), HeatFluxProfile::constant(q));
        mc.dz = cfg.dz;
        mc.substeps = cfg.substeps;
        return Ok(Some(mc));
    }
    Ok(None)
}

fn generate_one(table: &PropertyTable, cfg: &GeneratorConfig, index: usize) -> Result<(ChannelGeometry, MarchConfig, Vec<FlowState>, Vec<f64>), String> {
    let geom = draw_geometry(cfg, index / cfg.channels_per_geometry).map_err(|e| e.to_string())?;
    let mc = draw_operating_point(table, cfg, &geom, index)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no feasible operating point in {MAX_DRAWS} draws"))?;
    let states = march(table, &geom, &mc).map_err(|e| e.to_string())?;
    let tw = wall_temperatures(table, &geom, &mc, &states).map_err(|e| e.to_string())?;
    Ok((geom, mc, states, tw))
}

/// Generates `cfg.n_channels` labelled channels. Channels run in parallel
/// but are assembled in index order, so the output depends only on the
/// configuration. Channels whose march fails are skipped and reported.
pub fn generate_channels(table: &PropertyTable, cfg: &GeneratorConfig) -> Result<Generated> {
    cfg.validate(table)?;
    let results: Vec<_> = (0..cfg.n_channels)
        .into_par_iter()
        .map(|i| generate_one(table, cfg, i))
        .collect();

    let noise = Normal::new(0.0, cfg.label_noise_std.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Validation(e.to_string()))?;
    let mut noise_rng = stream_rng(cfg.rng_seed ^ 0x006e_6f69_7365, 0);
    let mut dataset = Dataset::new(Provenance::Oracle, true);
    let mut channels = Vec::new();
    let mut skipped = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok((geometry, config, states, tw)) => {
                let start = dataset.len();
                for (s, t) in states.iter().zip(&tw) {
                    let label = if cfg.label_noise_std > 0.0 {
                        t + noise.sample(&mut noise_rng)
                    } else {
                        *t
                    };
                    dataset.push(station_record(s, &geometry, &config, Some(label)))?;
                }
                channels.push(ChannelCase {
                    index,
                    geometry,
                    config,
                    states,
                    wall_temperatures: tw,
                    rows: start..dataset.len(),
                });
            }
            Err(reason) => skipped.push(SkippedChannel { index, reason }),
        }
    }
    if dataset.is_empty() {
        return Err(Error::Degenerate(format!(
            "every channel failed; first reason: {}",
            skipped.first().map_or("none", |s| s.reason.as_str())
        )));
    }
    Ok(Generated {
        dataset,
        channels,
        skipped,
    })
}

pub fn generate(table: &PropertyTable, cfg: &GeneratorConfig) -> Result<Dataset> {
    Ok(generate_channels(table, cfg)?.dataset)
}

/// Configuration and label constants, for run manifests.
pub fn oracle_manifest(cfg: &GeneratorConfig) -> serde_json::Value {
    serde_json::json!({
        "config": cfg,
        "constants": {
            "nusselt_coeff": NUSSELT_COEFF,
            "roughness_coeff": ROUGHNESS_COEFF,
            "k_solid[W/m.K]": K_SOLID,
            "label": "T_w = T_b + q_w/(alpha*eta_fin) + q*d/k_solid",
        },
    })
}
