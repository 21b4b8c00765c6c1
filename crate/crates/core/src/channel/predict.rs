use super::{march, ChannelGeometry, FlowState, MarchConfig};
use crate::datapipe::{FeatureSpec, SampleRecord};
use crate::error::{Error, Result};
use crate::fluidprops::PropertyTable;
use crate::neural::{Mlp, ScalerParams};

/// Sample record for one marched station. `label` is the wall temperature
/// when known.
pub fn station_record(
    state: &FlowState,
    geom: &ChannelGeometry,
    cfg: &MarchConfig,
    label: Option<f64>,
) -> SampleRecord {
    SampleRecord {
        z: state.z,
        t_b: state.t_b,
        h_b: state.h_stat,
        p_b: state.p,
        v_b: state.v,
        g: cfg.mdot / geom.area_m2(),
        q: cfg.heat_flux.at(state.z),
        r: geom.roughness,
        a: geom.area(),
        ar: geom.aspect_ratio(),
        d: geom.wall_thickness,
        t_w: label,
    }
}

/// Marches the channel and predicts the wall temperature [K] at every station.
pub fn predict_channel(
    table: &PropertyTable,
    geom: &ChannelGeometry,
    cfg: &MarchConfig,
    model: &Mlp,
    scaler: &ScalerParams,
) -> Result<Vec<(FlowState, f64)>> {
    let spec = FeatureSpec::new(scaler.feature_names().to_vec())?;
    if model.input_dim() != spec.len() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            actual: spec.len(),
        });
    }
    let states = march(table, geom, cfg)?;
    states
        .into_iter()
        .map(|s| {
            let raw = spec.extract(&station_record(&s, geom, cfg, None));
            let x = scaler.transform(&raw)?;
            Ok((s, model.forward(&x)?))
        })
        .collect()
}
