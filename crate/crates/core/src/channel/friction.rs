//! Pressure-loss relations.

use crate::error::{Error, Result};

/// Churchill friction factor (Darcy convention), valid across the laminar,
/// transitional and turbulent regimes.
///
/// `rel_roughness` is the sand-grain roughness divided by the hydraulic
/// diameter.
pub fn friction_factor(re: f64, rel_roughness: f64) -> Result<f64> {
    if !(re.is_finite() && re > 0.0) {
        return Err(Error::OutOfRange(format!("Reynolds number must be positive, got {re}")));
    }
    if !(rel_roughness.is_finite() && rel_roughness >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "relative roughness must be non-negative, got {rel_roughness}"
        )));
    }
    let denom = (7.0 / re).powf(0.9) + 0.27 * rel_roughness;
    let log_arg = 1.0 / denom;
    if !(log_arg.is_finite() && log_arg > 0.0) {
        return Err(Error::OutOfRange(format!(
            "Churchill log argument {log_arg} is not positive"
        )));
    }
    let a = (2.457 * log_arg.ln()).powi(16);
    let b = (37530.0 / re).powi(16);
    let laminar = (8.0 / re).powi(12);
    Ok(8.0 * (laminar + 1.0 / (a + b).powf(1.5)).powf(1.0 / 12.0))
}

/// Darcy-Weisbach pressure loss `½ f ρ v² Δz / D_h` in SI units.
pub fn darcy_weisbach(f: f64, rho: f64, v: f64, dz_m: f64, dh_m: f64) -> f64 {
    0.5 * f * rho * v * v * dz_m / dh_m
}
