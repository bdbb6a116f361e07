//! WebAssembly bindings for the browser demo. The plain functions return
//! `fwc_core::Result` so they can be tested natively; the `#[wasm_bindgen]`
//! wrappers only convert errors into JS exceptions.

use wasm_bindgen::prelude::*;

use fwc_core::beamform::{self, ArrayGeometry};
use fwc_core::optics::{dispersion_fading_db, FiberParams, RadioParams, Scheme, SchemeConfig};
use fwc_core::power::{crossover_length, CrossoverSearch, PowerParams};
use fwc_core::units::SPEED_OF_LIGHT;

/// Lower edge of the demo array's 2:1 band; the array is matched here.
pub const BEAM_F0_HZ: f64 = 10e9;
pub const BEAM_THETA_STEP_DEG: f64 = 0.25;

/// `points` evenly spaced fiber lengths from 0 to `max_km` inclusive.
pub fn length_grid(max_km: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| max_km * i as f64 / (n - 1) as f64).collect(),
    }
}

/// RFoF dispersion fading in dB over the length grid. Nulls are `+inf`.
pub fn dispersion_curve_db(f_rf_hz: f64, max_km: f64, points: usize) -> fwc_core::Result<Vec<f64>> {
    length_grid(max_km, points)
        .into_iter()
        .map(|l| dispersion_fading_db(&FiberParams::default().with_length(l), f_rf_hz))
        .collect()
}

fn scheme_at(scheme: Scheme, f_rf_hz: f64) -> SchemeConfig {
    SchemeConfig::new(
        scheme,
        RadioParams {
            rf_carrier_hz: f_rf_hz,
            ..RadioParams::default()
        },
    )
}

/// Total system power in W over the length grid, concatenated as
/// `[BBoF..., IFoF..., RFoF...]`.
pub fn power_curves_w(
    f_rf_hz: f64,
    num_raps: usize,
    p_tx_w: f64,
    max_km: f64,
    points: usize,
) -> fwc_core::Result<Vec<f64>> {
    let params = PowerParams::default();
    let grid = length_grid(max_km, points);
    let mut out = Vec::with_capacity(3 * grid.len());
    for scheme in Scheme::ALL {
        let sc = scheme_at(scheme, f_rf_hz);
        for &l in &grid {
            let b = params.system_power(&sc, num_raps, p_tx_w, &FiberParams::default().with_length(l))?;
            out.push(b.total_watts);
        }
    }
    Ok(out)
}

/// First fiber length at which RFoF draws more power than BBoF, or `None`.
pub fn rfof_crossover_km(f_rf_hz: f64, num_raps: usize, p_tx_w: f64, max_km: f64) -> fwc_core::Result<Option<f64>> {
    let search = CrossoverSearch {
        to_km: max_km,
        ..CrossoverSearch::default()
    };
    crossover_length(
        &PowerParams::default(),
        &scheme_at(Scheme::Rfof, f_rf_hz),
        &scheme_at(Scheme::Bbof, f_rf_hz),
        num_raps,
        p_tx_w,
        &FiberParams::default(),
        search,
    )
}

/// Normalized |AF| / N from -90 to 90 degrees for a half-wavelength (at
/// 2 f0) ULA steered to `steer_deg`, evaluated at `f_hz`.
pub fn beam_pattern_mag(
    elements: usize,
    steer_deg: f64,
    f_hz: f64,
    true_time_delay: bool,
) -> fwc_core::Result<Vec<f64>> {
    let spacing = SPEED_OF_LIGHT / (2.0 * 2.0 * BEAM_F0_HZ);
    let geom = ArrayGeometry::ula(elements, spacing, BEAM_F0_HZ, (BEAM_F0_HZ, 2.0 * BEAM_F0_HZ))?;
    let theta0 = steer_deg.to_radians();
    let spec = if true_time_delay {
        beamform::ttd_weights(&geom, theta0)
    } else {
        beamform::phase_only_weights(&geom, theta0, BEAM_F0_HZ)
    };
    beamform::angle_grid_deg(-90.0, 90.0, BEAM_THETA_STEP_DEG)
        .into_iter()
        .map(|t| Ok(beamform::array_factor(&geom, &spec, f_hz, t.to_radians())?.norm() / elements as f64))
        .collect()
}

fn js(e: fwc_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[wasm_bindgen(js_name = dispersionCurve)]
pub fn dispersion_curve(f_rf_ghz: f64, max_km: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    dispersion_curve_db(f_rf_ghz * 1e9, max_km, points).map_err(js)
}

#[wasm_bindgen(js_name = powerCurves)]
pub fn power_curves(
    f_rf_ghz: f64,
    num_raps: usize,
    p_tx_w: f64,
    max_km: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    power_curves_w(f_rf_ghz * 1e9, num_raps, p_tx_w, max_km, points).map_err(js)
}

/// Crossover length in km, `NaN` when RFoF stays cheaper over the range.
#[wasm_bindgen(js_name = crossoverKm)]
pub fn crossover_km(f_rf_ghz: f64, num_raps: usize, p_tx_w: f64, max_km: f64) -> Result<f64, JsValue> {
    rfof_crossover_km(f_rf_ghz * 1e9, num_raps, p_tx_w, max_km)
        .map(|x| x.unwrap_or(f64::NAN))
        .map_err(js)
}

#[wasm_bindgen(js_name = beamPattern)]
pub fn beam_pattern(elements: usize, steer_deg: f64, f_ghz: f64, true_time_delay: bool) -> Result<Vec<f64>, JsValue> {
    beam_pattern_mag(elements, steer_deg, f_ghz * 1e9, true_time_delay).map_err(js)
}
