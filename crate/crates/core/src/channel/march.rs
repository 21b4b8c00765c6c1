use std::fmt::Write as _;

use super::{enthalpy_step, friction_factor, pressure_step, ChannelGeometry};
use crate::error::{Error, Result};
use crate::fluidprops::{PropertyTable, T_MAX_EXTENDED};
use crate::io_util::fmt_f64;

const CLOSURE_TOL_K: f64 = 1e-4;
const CLOSURE_MAX_ITER: usize = 50;
const OUTLET_TOL_PA: f64 = 100.0;

/// Bulk state at one station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    /// Stream-wise position [mm].
    pub z: f64,
    /// Static pressure [Pa].
    pub p: f64,
    /// Total and static specific enthalpy [J/kg].
    pub h_tot: f64,
    pub h_stat: f64,
    /// Bulk temperature [K].
    pub t_b: f64,
    /// Bulk density [kg/m³].
    pub rho: f64,
    /// Bulk velocity [m/s].
    pub v: f64,
    pub re: f64,
    /// Churchill friction factor at this station.
    pub f: f64,
}

/// Piecewise-constant heat flux [W/m²] over stream-wise position [mm].
#[derive(Debug, Clone, PartialEq)]
pub struct HeatFluxProfile {
    segments: Vec<(f64, f64)>,
}

impl HeatFluxProfile {
    pub fn constant(q: f64) -> Self {
        HeatFluxProfile { segments: vec![(0.0, q)] }
    }

    /// `segments` holds `(z_start_mm, q)` pairs; the first must start at 0 and
    /// starts must be strictly ascending.
    pub fn piecewise(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.first().map(|s| s.0) != Some(0.0) {
            return Err(Error::Validation("heat-flux profile must start at z = 0".into()));
        }
        if segments.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Validation("heat-flux segment starts must ascend".into()));
        }
        if let Some(s) = segments.iter().find(|s| !(s.1 >= 0.0 && s.1.is_finite())) {
            return Err(Error::Validation(format!("heat flux must be >= 0, got {}", s.1)));
        }
        Ok(HeatFluxProfile { segments })
    }

    pub fn at(&self, z: f64) -> f64 {
        let i = self.segments.partition_point(|s| s.0 <= z).saturating_sub(1);
        self.segments[i].1
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressureBoundary {
    /// Static pressure at the inlet [Pa]; marched directly.
    Inlet(f64),
    /// Static pressure at the outlet [Pa]; the inlet pressure is found by a
    /// bracketed secant search.
    Outlet(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarchConfig {
    /// Mass flow rate [kg/s].
    pub mdot: f64,
    /// Inlet bulk temperature [K].
    pub t_in: f64,
    pub pressure: PressureBoundary,
    pub heat_flux: HeatFluxProfile,
    /// Station spacing [mm].
    pub dz: f64,
    /// Internal sub-steps per station interval.
    pub substeps: usize,
}

impl MarchConfig {
    pub const DEFAULT_DZ: f64 = 2.0;

    pub fn new(mdot: f64, t_in: f64, pressure: PressureBoundary, heat_flux: HeatFluxProfile) -> Self {
        MarchConfig {
            mdot,
            t_in,
            pressure,
            heat_flux,
            dz: Self::DEFAULT_DZ,
            substeps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mdot > 0.0 && self.mdot.is_finite()) {
            return Err(Error::Validation(format!("mass flow must be positive, got {}", self.mdot)));
        }
        if !(self.t_in > 0.0 && self.t_in.is_finite()) {
            return Err(Error::Validation(format!("inlet temperature must be positive, got {}", self.t_in)));
        }
        if !(self.dz > 0.0 && self.dz.is_finite()) {
            return Err(Error::Validation(format!("dz must be positive, got {}", self.dz)));
        }
        if self.substeps == 0 {
            return Err(Error::Validation("substeps must be at least 1".into()));
        }
        let p = match self.pressure {
            PressureBoundary::Inlet(p) | PressureBoundary::Outlet(p) => p,
        };
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Validation(format!("pressure must be positive, got {p}")));
        }
        Ok(())
    }
}

/// Station positions `0, dz, 2 dz, ..., length`; the last interval may be short.
pub(crate) fn station_positions(length: f64, dz: f64) -> Vec<f64> {
    let n = ((length / dz) - 1e-9).ceil().max(0.0) as usize;
    let mut z: Vec<f64> = (0..n).map(|k| k as f64 * dz).collect();
    z.push(length);
    z
}

struct Marcher<'a> {
    table: &'a PropertyTable,
    geom: &'a ChannelGeometry,
    cfg: &'a MarchConfig,
    mass_flux: f64,
}

impl Marcher<'_> {
    fn state_at(&self, z: f64, p: f64, h_tot: f64, props_rho: f64, t_b: f64, mu: f64) -> Result<FlowState> {
        let v = self.mass_flux / props_rho;
        let re = self.mass_flux * self.geom.hydraulic_diameter_m() / mu;
        Ok(FlowState {
            z,
            p,
            h_tot,
            h_stat: h_tot - 0.5 * v * v,
            t_b,
            rho: props_rho,
            v,
            re,
            f: friction_factor(re, self.geom.relative_roughness())?,
        })
    }

    fn inlet(&self, p_in: f64) -> Result<FlowState> {
        let props = self.table.query(p_in, self.cfg.t_in)?;
        let v = self.mass_flux / props.rho;
        let h_tot = props.h + 0.5 * v * v;
        self.state_at(0.0, p_in, h_tot, props.rho, props.t, props.mu)
    }

    /// Closes the state at `(p, h_tot)` by iterating temperature, density and
    /// velocity to a fixed point.
    fn close(&self, station: usize, z: f64, p: f64, h_tot: f64, v_guess: f64) -> Result<FlowState> {
        let mut v = v_guess;
        let mut t_prev = f64::NAN;
        for _ in 0..CLOSURE_MAX_ITER {
            let t = self.table.temperature_from_enthalpy(p, h_tot - 0.5 * v * v)?;
            let props = self.table.query(p, t)?;
            v = self.mass_flux / props.rho;
            if (t - t_prev).abs() < CLOSURE_TOL_K {
                return self.state_at(z, p, h_tot, props.rho, t, props.mu);
            }
            t_prev = t;
        }
        self.close_bracketed(station, z, p, h_tot)
    }

    /// Fallback closure for when the fixed point stops contracting (steep
    /// density drop at high velocity). `h(p, T) + ½ (G/ρ(p, T))²` increases
    /// strictly with `T`, so bisection on it cannot fail inside the table.
    fn close_bracketed(&self, station: usize, z: f64, p: f64, h_tot: f64) -> Result<FlowState> {
        let residual = |t: f64| -> Result<f64> {
            let s = self.table.query(p, t)?;
            let v = self.mass_flux / s.rho;
            Ok(s.h + 0.5 * v * v - h_tot)
        };
        let (mut lo, mut hi) = (self.table.t_min(), T_MAX_EXTENDED);
        if residual(lo)? > 0.0 || residual(hi)? < 0.0 {
            return Err(Error::OutOfRange(format!(
                "total enthalpy {h_tot} J/kg cannot be closed at p = {p} Pa"
            )));
        }
        let mut iterations = 0;
        while hi - lo > 0.1 * CLOSURE_TOL_K {
            iterations += 1;
            if iterations > 200 {
                return Err(Error::Convergence { station, iterations });
            }
            let mid = 0.5 * (lo + hi);
            if residual(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        let props = self.table.query(p, t)?;
        self.state_at(z, p, h_tot, props.rho, t, props.mu)
    }

    fn run_from_inlet(&self, p_in: f64) -> Result<Vec<FlowState>> {
        let zs = station_positions(self.geom.length, self.cfg.dz);
        let mut states = Vec::with_capacity(zs.len());
        let mut state = self.inlet(p_in)?;
        states.push(state);
        let sub = self.cfg.substeps;
        for (k, w) in zs.windows(2).enumerate() {
            let ds = (w[1] - w[0]) / sub as f64;
            for s in 0..sub {
                let z0 = w[0] + ds * s as f64;
                let z1 = if s + 1 == sub { w[1] } else { z0 + ds };
                let q = self.cfg.heat_flux.at(z0);
                let dh = enthalpy_step(q, self.geom, ds, self.cfg.mdot);
                let dp = pressure_step(&state, self.geom, ds)?;
                state = self.close(k + 1, z1, state.p - dp, state.h_tot + dh, state.v)?;
            }
            states.push(state);
        }
        Ok(states)
    }

    fn outlet_residual(&self, p_in: f64, p_out: f64) -> Result<Option<(f64, Vec<FlowState>)>> {
        match self.run_from_inlet(p_in) {
            Ok(states) => {
                let r = states.last().expect("at least one station").p - p_out;
                Ok(Some((r, states)))
            }
            // the pressure fell out of the table: inlet pressure too low
            Err(Error::OutOfRange(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn run_to_outlet(&self, p_out: f64) -> Result<Vec<FlowState>> {
        let p_cap = self.table.p_max();
        let estimate = {
            let s = self.inlet(p_out)?;
            let per_mm = pressure_step(&s, self.geom, 1.0)?;
            (per_mm * self.geom.length).max(1e3)
        };

        // lower end: residual is negative (or the march fails) at p_out itself
        let mut lo = p_out;
        let mut r_lo: Option<f64> = self.outlet_residual(lo, p_out)?.map(|x| x.0);
        if let Some(r) = r_lo {
            if r.abs() < OUTLET_TOL_PA {
                return self.run_from_inlet(lo);
            }
        }

        let mut step = 1.5 * estimate;
        let (mut hi, mut r_hi) = loop {
            let cand = (p_out + step).min(p_cap);
            match self.outlet_residual(cand, p_out)? {
                Some((r, states)) if r.abs() < OUTLET_TOL_PA => return Ok(states),
                Some((r, _)) if r > 0.0 => break (cand, r),
                Some((r, _)) => {
                    lo = cand;
                    r_lo = Some(r);
                }
                None => lo = cand,
            }
            if cand >= p_cap {
                return Err(Error::OutOfRange(format!(
                    "no inlet pressure within the table reaches outlet pressure {p_out} Pa"
                )));
            }
            step *= 2.0;
        };

        // Illinois-modified false position on [lo, hi]
        let mut side = 0i8;
        for _ in 0..100 {
            let x = match r_lo {
                Some(rl) => hi - r_hi * (hi - lo) / (r_hi - rl),
                None => 0.5 * (lo + hi),
            };
            let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
            match self.outlet_residual(x, p_out)? {
                Some((r, states)) if r.abs() < OUTLET_TOL_PA => return Ok(states),
                Some((r, _)) if r > 0.0 => {
                    hi = x;
                    r_hi = r;
                    if side == 1 {
                        r_lo = r_lo.map(|v| 0.5 * v);
                    }
                    side = 1;
                }
                Some((r, _)) => {
                    lo = x;
                    r_lo = Some(r);
                    if side == -1 {
                        r_hi *= 0.5;
                    }
                    side = -1;
                }
                None => {
                    lo = x;
                    r_lo = None;
                    side = 0;
                }
            }
        }
        Err(Error::Convergence { station: 0, iterations: 100 })
    }
}

/// Marches bulk pressure and total enthalpy from inlet to outlet.
///
/// Each step adds the segment heat pick-up to the total enthalpy, subtracts
/// the Darcy-Weisbach loss evaluated at the upstream station, then closes the
/// new state through the equation of state and mass continuity.
pub fn march(table: &PropertyTable, geom: &ChannelGeometry, cfg: &MarchConfig) -> Result<Vec<FlowState>> {
    geom.validate()?;
    cfg.validate()?;
    let m = Marcher {
        table,
        geom,
        cfg,
        mass_flux: cfg.mdot / geom.area_m2(),
    };
    match cfg.pressure {
        PressureBoundary::Inlet(p) => m.run_from_inlet(p),
        PressureBoundary::Outlet(p) => m.run_to_outlet(p),
    }
}

pub const MARCH_HEADER: &str = "z[mm],p[Pa],h_tot[J/kg],h_stat[J/kg],T_b[K],rho[kg/m3],v[m/s],Re,f";

/// March output as CSV; the `T_w[K]` column is added when wall temperatures
/// are given.
pub fn march_csv(states: &[FlowState], wall_temperatures: Option<&[f64]>) -> String {
    let mut out = String::from(MARCH_HEADER);
    if wall_temperatures.is_some() {
        out.push_str(",T_w[K]");
    }
    out.push('\n');
    for (i, s) in states.iter().enumerate() {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(s.z),
            fmt_f64(s.p),
            fmt_f64(s.h_tot),
            fmt_f64(s.h_stat),
            fmt_f64(s.t_b),
            fmt_f64(s.rho),
            fmt_f64(s.v),
            fmt_f64(s.re),
            fmt_f64(s.f)
        );
        if let Some(tw) = wall_temperatures {
            let _ = write!(out, ",{}", fmt_f64(tw[i]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluidprops::make_pseudo_fluid;

    fn case5() -> (ChannelGeometry, MarchConfig) {
        let geom = ChannelGeometry::from_area(7.4, 3.7, 1.14, 250.0, 1.7).unwrap();
        let mdot = 10_100.0 * geom.area_m2();
        let cfg = MarchConfig::new(
            mdot,
            290.0,
            PressureBoundary::Outlet(51e5),
            HeatFluxProfile::constant(14e6),
        );
        (geom, cfg)
    }

    #[test]
    fn station_count() {
        assert_eq!(station_positions(250.0, 2.0).len(), 126);
        assert_eq!(station_positions(5.0, 2.0), vec![0.0, 2.0, 4.0, 5.0]);
    }

    #[test]
    fn heat_flux_profile_lookup() {
        let p = HeatFluxProfile::piecewise(vec![(0.0, 0.0), (80.0, 14e6)]).unwrap();
        assert_eq!(p.at(0.0), 0.0);
        assert_eq!(p.at(79.9), 0.0);
        assert_eq!(p.at(80.0), 14e6);
        assert_eq!(p.at(250.0), 14e6);
        assert!(HeatFluxProfile::piecewise(vec![(1.0, 0.0)]).is_err());
        assert!(HeatFluxProfile::piecewise(vec![(0.0, -1.0)]).is_err());
    }

    #[test]
    fn reference_case_shape() {
        let table = make_pseudo_fluid();
        let (geom, cfg) = case5();
        let states = march(&table, &geom, &cfg).unwrap();
        assert_eq!(states.len(), 126);
        for w in states.windows(2) {
            assert!(w[1].h_tot > w[0].h_tot);
            assert!(w[1].p < w[0].p);
        }
        for s in &states {
            assert_eq!(s.h_stat, s.h_tot - 0.5 * s.v * s.v);
            assert!(s.re > 0.0);
        }
    }

    #[test]
    fn adiabatic_march_conserves_total_enthalpy() {
        let table = make_pseudo_fluid();
        let (geom, mut cfg) = case5();
        cfg.t_in = 130.0;
        cfg.pressure = PressureBoundary::Inlet(100e5);
        cfg.heat_flux = HeatFluxProfile::constant(0.0);
        let states = march(&table, &geom, &cfg).unwrap();
        let h0 = states[0].h_tot;
        assert!(states.iter().all(|s| s.h_tot == h0));
        assert!(states.windows(2).all(|w| w[1].p < w[0].p));
    }

    #[test]
    fn outlet_boundary_matches_target() {
        let table = make_pseudo_fluid();
        let (geom, mut cfg) = case5();
        cfg.pressure = PressureBoundary::Outlet(51e5);
        let states = march(&table, &geom, &cfg).unwrap();
        assert!((states.last().unwrap().p - 51e5).abs() < OUTLET_TOL_PA);
        assert!(states[0].p > 51e5);
    }

    #[test]
    fn pressure_leaving_table_is_reported() {
        let table = make_pseudo_fluid();
        let (geom, mut cfg) = case5();
        cfg.pressure = PressureBoundary::Inlet(41e5);
        cfg.t_in = 400.0;
        assert!(matches!(march(&table, &geom, &cfg), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn csv_columns() {
        let table = make_pseudo_fluid();
        let (geom, cfg) = case5();
        let states = march(&table, &geom, &cfg).unwrap();
        let csv = march_csv(&states, None);
        assert_eq!(csv.lines().count(), 127);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 9);
        let tw = vec![500.0; states.len()];
        let csv = march_csv(&states, Some(&tw));
        assert!(csv.lines().next().unwrap().ends_with("T_w[K]"));
    }
}
