//! Physical constants and conversions between the customary engineering
//! units used at the API surface and SI units used internally.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

pub fn km_to_m(km: f64) -> f64 {
    km * 1e3
}

pub fn m_to_km(m: f64) -> f64 {
    m * 1e-3
}

pub fn nm_to_m(nm: f64) -> f64 {
    nm * 1e-9
}

/// ps/(nm km) to s/m^2.
pub fn dispersion_to_si(ps_per_nm_km: f64) -> f64 {
    ps_per_nm_km * 1e-12 / (1e-9 * 1e3)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB. Zero maps to -inf and +inf to +inf.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}
