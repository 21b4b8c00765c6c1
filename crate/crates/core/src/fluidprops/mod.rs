//! Tabulated coolant properties on a (pressure, temperature) grid.
//!
//! Queries interpolate bilinearly inside the table. Above the highest
//! tabulated temperature the fluid is treated as an ideal gas: density from
//! `p / (R T)`, enthalpy extended with the edge heat capacity, and transport
//! properties frozen at their edge values.

mod io;
mod pseudo;

pub use io::{load_table, load_table_with_gas_constant, write_table, TABLE_HEADER};
pub use pseudo::{make_pseudo_fluid, PseudoFluid};

use crate::error::{Error, Result};

/// Upper temperature bound of the ideal-gas extension [K].
pub const T_MAX_EXTENDED: f64 = 2000.0;

/// Interpolated thermodynamic state at one (p, T) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyState {
    /// Density [kg/m³].
    pub rho: f64,
    /// Specific enthalpy [J/kg].
    pub h: f64,
    /// Dynamic viscosity [Pa·s].
    pub mu: f64,
    /// Thermal conductivity [W/(m·K)].
    pub k: f64,
    /// Isobaric heat capacity [J/(kg·K)].
    pub cp: f64,
    /// Temperature [K].
    pub t: f64,
    /// Pressure [Pa].
    pub p: f64,
}

impl PropertyState {
    /// Prandtl number `mu cp / k`.
    pub fn prandtl(&self) -> f64 {
        self.mu * self.cp / self.k
    }
}

/// Property grids stored p-major: the value for `(pressures[i], temperatures[j])`
/// lives at index `i * temperatures.len() + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyTable {
    pressures: Vec<f64>,
    temperatures: Vec<f64>,
    rho: Vec<f64>,
    h: Vec<f64>,
    mu: Vec<f64>,
    k: Vec<f64>,
    cp: Vec<f64>,
    gas_constant_specific: f64,
}

#[derive(Clone, Copy)]
struct Node {
    rho: f64,
    h: f64,
    mu: f64,
    k: f64,
    cp: f64,
}

impl PropertyTable {
    /// Builds and validates a table. Grids are p-major with shape
    /// `pressures.len() x temperatures.len()`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        pressures: Vec<f64>,
        temperatures: Vec<f64>,
        rho: Vec<f64>,
        h: Vec<f64>,
        mu: Vec<f64>,
        k: Vec<f64>,
        cp: Vec<f64>,
        gas_constant_specific: f64,
    ) -> Result<Self> {
        let table = PropertyTable {
            pressures,
            temperatures,
            rho,
            h,
            mu,
            k,
            cp,
            gas_constant_specific,
        };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let (np, nt) = (self.pressures.len(), self.temperatures.len());
        if np < 2 || nt < 2 {
            return Err(Error::Validation(format!(
                "table needs at least 2 nodes per axis, got {np} x {nt}"
            )));
        }
        check_ascending("pressure", &self.pressures)?;
        check_ascending("temperature", &self.temperatures)?;
        if self.pressures[0] <= 0.0 || self.temperatures[0] <= 0.0 {
            return Err(Error::Validation("axes must be strictly positive".into()));
        }
        for (name, grid) in [
            ("rho", &self.rho),
            ("h", &self.h),
            ("mu", &self.mu),
            ("k", &self.k),
            ("cp", &self.cp),
        ] {
            if grid.len() != np * nt {
                return Err(Error::Validation(format!(
                    "{name} grid has {} values, expected {}",
                    grid.len(),
                    np * nt
                )));
            }
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("{name} grid has non-finite values")));
            }
        }
        for (name, grid) in [("rho", &self.rho), ("mu", &self.mu), ("k", &self.k), ("cp", &self.cp)] {
            if let Some(idx) = grid.iter().position(|&v| v <= 0.0) {
                let (i, j) = (idx / nt, idx % nt);
                return Err(Error::Validation(format!(
                    "{name} is not positive at p = {} Pa, T = {} K",
                    self.pressures[i], self.temperatures[j]
                )));
            }
        }
        for i in 0..np {
            let row = &self.h[i * nt..(i + 1) * nt];
            if row.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Validation(format!(
                    "enthalpy is not strictly increasing in T at p = {} Pa",
                    self.pressures[i]
                )));
            }
        }
        if !(self.gas_constant_specific.is_finite() && self.gas_constant_specific > 0.0) {
            return Err(Error::Validation(format!(
                "specific gas constant must be positive, got {}",
                self.gas_constant_specific
            )));
        }
        Ok(())
    }

    pub fn pressures(&self) -> &[f64] {
        &self.pressures
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    /// Highest tabulated temperature [K].
    pub fn t_max_table(&self) -> f64 {
        *self.temperatures.last().expect("validated non-empty")
    }

    pub fn t_min(&self) -> f64 {
        self.temperatures[0]
    }

    pub fn p_min(&self) -> f64 {
        self.pressures[0]
    }

    pub fn p_max(&self) -> f64 {
        *self.pressures.last().expect("validated non-empty")
    }

    pub fn gas_constant_specific(&self) -> f64 {
        self.gas_constant_specific
    }

    /// Node values at grid indices `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> PropertyState {
        let n = self.node_raw(i, j);
        PropertyState {
            rho: n.rho,
            h: n.h,
            mu: n.mu,
            k: n.k,
            cp: n.cp,
            t: self.temperatures[j],
            p: self.pressures[i],
        }
    }

    fn node_raw(&self, i: usize, j: usize) -> Node {
        let idx = i * self.temperatures.len() + j;
        Node {
            rho: self.rho[idx],
            h: self.h[idx],
            mu: self.mu[idx],
            k: self.k[idx],
            cp: self.cp[idx],
        }
    }

    /// Properties at pressure `p` [Pa] and temperature `t` [K].
    pub fn query(&self, p: f64, t: f64) -> Result<PropertyState> {
        if !(p >= self.p_min() && p <= self.p_max()) {
            return Err(Error::OutOfRange(format!(
                "pressure {p} Pa outside table [{}, {}]",
                self.p_min(),
                self.p_max()
            )));
        }
        if !(t >= self.t_min() && t <= T_MAX_EXTENDED) {
            return Err(Error::OutOfRange(format!(
                "temperature {t} K outside [{}, {T_MAX_EXTENDED}]",
                self.t_min()
            )));
        }
        let (i, a) = locate(&self.pressures, p);
        let t_max = self.t_max_table();
        if t <= t_max {
            let (j, b) = locate(&self.temperatures, t);
            let n00 = self.node_raw(i, j);
            let n10 = self.node_raw(i + 1, j);
            let n01 = self.node_raw(i, j + 1);
            let n11 = self.node_raw(i + 1, j + 1);
            let w00 = (1.0 - a) * (1.0 - b);
            let w10 = a * (1.0 - b);
            let w01 = (1.0 - a) * b;
            let w11 = a * b;
            let mix = |f: fn(&Node) -> f64| {
                w00 * f(&n00) + w10 * f(&n10) + w01 * f(&n01) + w11 * f(&n11)
            };
            Ok(PropertyState {
                rho: mix(|n| n.rho),
                h: mix(|n| n.h),
                mu: mix(|n| n.mu),
                k: mix(|n| n.k),
                cp: mix(|n| n.cp),
                t,
                p,
            })
        } else {
            // ideal-gas extension from the table edge
            let j = self.temperatures.len() - 1;
            let lo = self.node_raw(i, j);
            let hi = self.node_raw(i + 1, j);
            let lerp = |x: f64, y: f64| (1.0 - a) * x + a * y;
            let h_edge = lerp(lo.h, hi.h);
            let cp_edge = lerp(lo.cp, hi.cp);
            Ok(PropertyState {
                rho: p / (self.gas_constant_specific * t),
                h: h_edge + cp_edge * (t - t_max),
                mu: lerp(lo.mu, hi.mu),
                k: lerp(lo.k, hi.k),
                cp: cp_edge,
                t,
                p,
            })
        }
    }

    /// Enthalpy at `(p, t)`; cheaper than a full [`query`](Self::query).
    fn enthalpy(&self, p: f64, t: f64) -> Result<f64> {
        self.query(p, t).map(|s| s.h)
    }

    /// Inverts `h(p, T)` at fixed pressure by bisection.
    ///
    /// The bracket is `[T_min, T_MAX_EXTENDED]`. The returned temperature
    /// reproduces `h` to well within 1 J/kg.
    pub fn temperature_from_enthalpy(&self, p: f64, h: f64) -> Result<f64> {
        let mut lo = self.t_min();
        let mut hi = T_MAX_EXTENDED;
        let h_lo = self.enthalpy(p, lo)?;
        let h_hi = self.enthalpy(p, hi)?;
        if !(h >= h_lo && h <= h_hi) {
            return Err(Error::OutOfRange(format!(
                "enthalpy {h} J/kg outside [{h_lo}, {h_hi}] at p = {p} Pa"
            )));
        }
        if h == h_lo {
            return Ok(lo);
        }
        if h == h_hi {
            return Ok(hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let h_mid = self.enthalpy(p, mid)?;
            if h_mid == h {
                return Ok(mid);
            }
            if h_mid < h {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn check_ascending(name: &str, axis: &[f64]) -> Result<()> {
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation(format!("{name} axis has non-finite values")));
    }
    if let Some(w) = axis.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Validation(format!(
            "{name} axis is not strictly ascending ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Cell index `i` with `axis[i] <= x <= axis[i + 1]` and the fractional
/// position inside it. `x` must lie within the axis.
fn locate(axis: &[f64], x: f64) -> (usize, f64) {
    let n = axis.len();
    let i = axis.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2);
    let frac = (x - axis[i]) / (axis[i + 1] - axis[i]);
    (i, frac.clamp(0.0, 1.0))
}
