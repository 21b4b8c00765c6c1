//! Straight rectangular cooling channel: geometry, segment relations and the
//! station-by-station marching solver.

mod friction;
mod march;
mod predict;

pub use friction::{darcy_weisbach, friction_factor};
pub use march::{march, march_csv, FlowState, HeatFluxProfile, MarchConfig, PressureBoundary};
pub use predict::{predict_channel, station_record};

use crate::error::{Error, Result};

const MM: f64 = 1.0e-3;
const UM: f64 = 1.0e-6;

/// Rectangular channel cross-section with a fixed pitch fin.
///
/// Lengths are in millimetres, roughness in micrometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry {
    pub width: f64,
    pub height: f64,
    pub wall_thickness: f64,
    pub fin_thickness: f64,
    pub length: f64,
    pub roughness: f64,
}

impl ChannelGeometry {
    pub const DEFAULT_FIN_THICKNESS: f64 = 1.0;

    pub fn new(width: f64, height: f64, wall_thickness: f64, length: f64, roughness: f64) -> Result<Self> {
        let g = ChannelGeometry {
            width,
            height,
            wall_thickness,
            fin_thickness: Self::DEFAULT_FIN_THICKNESS,
            length,
            roughness,
        };
        g.validate()?;
        Ok(g)
    }

    /// Geometry from cross-section area [mm²] and aspect ratio `height / width`.
    pub fn from_area(area: f64, aspect_ratio: f64, wall_thickness: f64, length: f64, roughness: f64) -> Result<Self> {
        if !(area > 0.0 && aspect_ratio > 0.0) {
            return Err(Error::Validation(format!(
                "area and aspect ratio must be positive, got {area} and {aspect_ratio}"
            )));
        }
        let width = (area / aspect_ratio).sqrt();
        Self::new(width, area / width, wall_thickness, length, roughness)
    }

    pub fn with_fin_thickness(mut self, fin_thickness: f64) -> Result<Self> {
        self.fin_thickness = fin_thickness;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("width", self.width),
            ("height", self.height),
            ("wall_thickness", self.wall_thickness),
            ("fin_thickness", self.fin_thickness),
            ("length", self.length),
            ("roughness", self.roughness),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Cross-section area [mm²].
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.height / self.width
    }

    /// Hydraulic diameter [mm] of the fully wetted rectangle.
    pub fn hydraulic_diameter(&self) -> f64 {
        2.0 * self.width * self.height / (self.width + self.height)
    }

    pub fn area_m2(&self) -> f64 {
        self.area() * MM * MM
    }

    pub fn hydraulic_diameter_m(&self) -> f64 {
        self.hydraulic_diameter() * MM
    }

    /// Roughness over hydraulic diameter.
    pub fn relative_roughness(&self) -> f64 {
        self.roughness * UM / self.hydraulic_diameter_m()
    }

    /// Channel width plus one fin [m]: the hot-gas face served by one channel.
    pub fn pitch_m(&self) -> f64 {
        (self.width + self.fin_thickness) * MM
    }

    /// Messages for geometries outside the usual design envelope
    /// (area 1-10 mm², aspect ratio 1-9.2). Such geometries are still allowed.
    pub fn envelope_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let a = self.area();
        if !(1.0..=10.0).contains(&a) {
            w.push(format!("channel area {a:.3} mm² outside 1-10 mm²"));
        }
        let ar = self.aspect_ratio();
        if !(1.0..=9.2).contains(&ar) {
            w.push(format!("aspect ratio {ar:.3} outside 1.0-9.2"));
        }
        w
    }
}

/// Heat pick-up per unit mass `q (b + fin) Δz / ṁ` [J/kg] over one segment.
///
/// `dz` is in millimetres, `q_local` in W/m², `mdot` in kg/s.
pub fn enthalpy_step(q_local: f64, geom: &ChannelGeometry, dz: f64, mdot: f64) -> f64 {
    q_local * geom.pitch_m() * dz * MM / mdot
}

/// Darcy-Weisbach loss [Pa] over `dz` millimetres with the friction factor
/// evaluated at the station's Reynolds number.
pub fn pressure_step(state: &FlowState, geom: &ChannelGeometry, dz: f64) -> Result<f64> {
    if state.v == 0.0 {
        return Ok(0.0);
    }
    let f = friction_factor(state.re, geom.relative_roughness())?;
    Ok(darcy_weisbach(f, state.rho, state.v, dz * MM, geom.hydraulic_diameter_m()))
}
